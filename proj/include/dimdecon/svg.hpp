#pragma once

#include <iosfwd>
#include <string>

#include "dimdecon/partition.hpp"

namespace dimdecon {

// Standalone SVG line plot of a sweep: normalized score against leading
// dimension, linear axes, with the reported spikes marked and labelled.
// Flagged points are left out of the line.
void write_sweep_svg(const ScoreSeries& series, const SpikeReport& spikes, std::ostream& out,
                     const std::string& title = "");

}  // namespace dimdecon
