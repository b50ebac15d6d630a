#pragma once

// Direct-definition matcher used as the reference for the engine:
//   Sure     every finding holds against the working memory
//   Excluded some finding's slot is answered but the finding does not hold
//   Expected otherwise
// Working memory here is a plain concept -> value map over raw names.

#include "rcses/inference.hpp"

#include <map>
#include <string>

namespace rcses::testing {

using PlainWm = std::map<std::string, std::string>;

inline RuleStatus oracle_status(const Rule& rule, const PlainWm& wm) {
    bool all_hold = true;
    bool any_violated = false;
    for (const auto& f : rule.findings) {
        auto it = wm.find(f.concept_name);
        bool holds = false;
        if (it != wm.end()) {
            holds = f.polarity == Polarity::MustEqual ? it->second == f.value : it->second != f.value;
            if (!holds) any_violated = true;
        }
        all_hold = all_hold && holds;
    }
    if (all_hold) return RuleStatus::Sure;
    if (any_violated) return RuleStatus::Excluded;
    return RuleStatus::Expected;
}

}  // namespace rcses::testing
