#pragma once

// Random small knowledge bases for property tests. Names are short ASCII
// tokens so normalization is the identity and the oracle can compare raw text.

#include "rcses/knowledge_model.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace rcses::testing {

struct RandomKbShape {
    int max_rules = 6;
    int max_findings = 4;
    int max_values = 3;
    int max_concepts = 5;
    double must_differ_rate = 0.25;
};

struct RandomKb {
    Ontology ontology;
    RuleBase rulebase;  // exactly one model, named "M"
    std::vector<std::string> concepts;
    std::map<std::string, std::vector<std::string>> domains;
};

inline RandomKb random_kb(std::mt19937& rng, const RandomKbShape& shape = {}) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RandomKb kb;

    const int n_concepts = pick(1, shape.max_concepts);
    Context ctx{"ctx", {}};
    for (int c = 0; c < n_concepts; ++c) {
        Concept con{"c" + std::to_string(c), kDefaultProperty, {}};
        const int n_values = pick(1, shape.max_values);
        for (int v = 0; v < n_values; ++v) con.values.push_back("c" + std::to_string(c) + "v" + std::to_string(v));
        kb.concepts.push_back(con.name);
        kb.domains[con.name] = con.values;
        ctx.concepts.push_back(std::move(con));
    }
    kb.ontology.regulations.push_back({"reg", {std::move(ctx)}});

    Model model{"M", {}};
    const int n_rules = pick(1, shape.max_rules);
    std::bernoulli_distribution differ(shape.must_differ_rate);
    for (int r = 0; r < n_rules; ++r) {
        Rule rule{"R" + std::to_string(r + 1), "conclusion " + std::to_string(r + 1), {}};
        std::vector<std::string> pool = kb.concepts;
        std::shuffle(pool.begin(), pool.end(), rng);
        const int n_findings = pick(1, std::min<int>(shape.max_findings, static_cast<int>(pool.size())));
        for (int f = 0; f < n_findings; ++f) {
            const auto& dom = kb.domains[pool[static_cast<std::size_t>(f)]];
            Finding fd{pool[static_cast<std::size_t>(f)], kDefaultProperty,
                       dom[static_cast<std::size_t>(pick(0, static_cast<int>(dom.size()) - 1))],
                       differ(rng) ? Polarity::MustDiffer : Polarity::MustEqual};
            rule.findings.push_back(std::move(fd));
        }
        model.rules.push_back(std::move(rule));
    }
    kb.rulebase.models.push_back(std::move(model));
    return kb;
}

}  // namespace rcses::testing
