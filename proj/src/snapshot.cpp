#include "rcses/snapshot.hpp"

#include "rcses/kb_xml.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace rcses {

const OntologyIndex::Entry* OntologyIndex::find(const std::string& concept_key) const {
    auto it = concepts.find(concept_key);
    return it == concepts.end() ? nullptr : &it->second;
}

std::string kb_fingerprint(const Ontology& ontology, const RuleBase& rulebase) {
    const std::string a = serialize_ontology(ontology).bytes;
    const std::string b = serialize_rulebase(rulebase).bytes;

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    const unsigned char sep = 0;
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
              EVP_DigestUpdate(ctx, a.data(), a.size()) == 1 && EVP_DigestUpdate(ctx, &sep, 1) == 1 &&
              EVP_DigestUpdate(ctx, b.data(), b.size()) == 1 && EVP_DigestFinal_ex(ctx, digest, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("SHA-256 digest failed");

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0F]);
    }
    return out;
}

KbSnapshot::KbSnapshot(Ontology ontology, RuleBase rulebase, std::uint64_t version, NormalizationPolicy policy)
    : ontology_(std::move(ontology)),
      rulebase_(std::move(rulebase)),
      version_(version),
      policy_(policy),
      fingerprint_(kb_fingerprint(ontology_, rulebase_)) {
    for (const auto& reg : ontology_.regulations) {
        for (const auto& ctx : reg.contexts) {
            for (const auto& con : ctx.concepts) {
                auto& entry = ontology_index_.concepts[key(con.name)];
                std::string prop = key(con.property);
                if (std::find(entry.property_keys.begin(), entry.property_keys.end(), prop) ==
                    entry.property_keys.end()) {
                    entry.property_keys.push_back(std::move(prop));
                }
                for (const auto& v : con.values) {
                    if (entry.domain_keys.insert(key(v)).second) entry.domain.push_back(v);
                }
            }
        }
    }

    compiled_.reserve(rulebase_.models.size());
    for (const auto& model : rulebase_.models) {
        CompiledModel cm;
        for (std::size_t r = 0; r < model.rules.size(); ++r) {
            const auto& rule = model.rules[r];
            CompiledModel::RuleRef rr{static_cast<std::uint32_t>(cm.findings.size()),
                                      static_cast<std::uint32_t>(rule.findings.size())};
            for (const auto& f : rule.findings) {
                std::string sk = slot_key(f.concept_name, f.property);
                auto [it, inserted] = cm.slot_index.try_emplace(sk, static_cast<std::uint32_t>(cm.slots.size()));
                if (inserted) cm.slots.push_back({sk, f.concept_name, f.property, {}});
                auto global = static_cast<std::uint32_t>(cm.findings.size());
                cm.slots[it->second].findings.push_back(global);
                cm.findings.push_back({it->second, static_cast<std::uint32_t>(r), key(f.value), f.polarity});
            }
            cm.rules.push_back(rr);
        }
        compiled_.push_back(std::move(cm));
    }
}

std::ptrdiff_t KbSnapshot::model_index(std::string_view name) const {
    const std::string k = key(name);
    for (std::size_t i = 0; i < rulebase_.models.size(); ++i) {
        if (key(rulebase_.models[i].name) == k) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

std::string KbSnapshot::slot_key(std::string_view concept_name, std::string_view property) const {
    std::string k = key(concept_name);
    k.push_back('\x1F');
    k += key(property);
    return k;
}

KbSnapshotPtr make_snapshot(Ontology ontology, RuleBase rulebase, std::uint64_t version, NormalizationPolicy policy) {
    return std::make_shared<const KbSnapshot>(std::move(ontology), std::move(rulebase), version, policy);
}

}  // namespace rcses
