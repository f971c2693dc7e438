#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace testing {

// Straightforward reference simulator, written from the machine description
// without sharing code with the library: an explicit list of the actions in
// index order, a sparse tape and string output.
struct NaiveOutcome {
    bool halted = false;
    std::string output;
};

struct NaiveAction {
    int write;
    int move;  // -1 left, +1 right, 0 halt
    int next;  // -1 halt
};

inline std::vector<NaiveAction> naive_actions(int states) {
    std::vector<NaiveAction> acts;
    for (int next = 0; next < states; ++next) {
        for (int right = 0; right < 2; ++right) {
            for (int write = 0; write < 2; ++write) acts.push_back({write, right ? 1 : -1, next});
        }
    }
    acts.push_back({0, 0, -1});
    acts.push_back({1, 0, -1});
    return acts;
}

inline NaiveOutcome naive_run(int states, std::uint64_t index, int budget) {
    const auto acts = naive_actions(states);
    std::map<std::pair<int, int>, NaiveAction> rules;
    std::uint64_t rest = index;
    for (int state = 0; state < states; ++state) {
        for (int sym = 0; sym < 2; ++sym) {
            rules[{state, sym}] = acts[rest % acts.size()];
            rest /= acts.size();
        }
    }
    std::map<long, int> tape;
    long head = 0, lo = 0, hi = 0;
    int state = 0;
    for (int step = 0; step < budget; ++step) {
        const int sym = tape.count(head) ? tape[head] : 0;
        const NaiveAction a = rules[{state, sym}];
        tape[head] = a.write;
        if (a.next < 0) {
            NaiveOutcome out{true, ""};
            for (long p = lo; p <= hi; ++p) out.output += tape.count(p) && tape[p] ? '1' : '0';
            return out;
        }
        head += a.move;
        lo = std::min(lo, head);
        hi = std::max(hi, head);
        state = a.next;
    }
    return {};
}

}  // namespace testing
