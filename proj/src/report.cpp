#include "diffspec/report.hpp"

#include <limits>

#include "diffspec/number_theory.hpp"

namespace diffspec {

using nlohmann::json;

json wide_json(Wide value)
{
    if (value <= std::numeric_limits<std::uint64_t>::max())
        return static_cast<std::uint64_t>(value);
    return nt::to_decimal(value);
}

std::string bracket_sequence(const SparseCounts& omega, std::uint64_t dense_limit)
{
    const std::uint64_t top = omega.empty() ? 0 : omega.rbegin()->first;
    std::string out;
    if (top > dense_limit) {
        out = "{";
        for (const auto& [i, c] : omega) {
            if (c == 0)
                continue;
            if (out.size() > 1)
                out += ", ";
            out += std::to_string(i) + ": " + std::to_string(c);
        }
        return out + "}";
    }
    out = "[";
    for (std::uint64_t i = 0; i <= top; ++i) {
        if (i != 0)
            out += ", ";
        auto it = omega.find(i);
        out += std::to_string(it == omega.end() ? 0 : it->second);
    }
    return out + "]";
}

std::string compact_sequence(const SparseCounts& omega)
{
    std::string out;
    for (const auto& [i, c] : omega) {
        if (c == 0)
            continue;
        if (!out.empty())
            out += ';';
        out += std::to_string(i) + ":" + std::to_string(c);
    }
    return out;
}

json spectrum_json(const FieldCtx& field, const DifferentialSpectrum& spectrum)
{
    json omega = json::array();
    for (const auto& [i, c] : spectrum.omega)
        omega.push_back({i, c});
    const bool ok = check_identities(spectrum);
    json out = {
        {"p", field.p()},
        {"n", field.n()},
        {"d", spectrum.d},
        {"modulus", field.spec().modulus},
        {"omega", omega},
        {"uniformity", spectrum.uniformity},
    };
    if (ok) {
        const auto ad = ambiguity_deficiency(spectrum);
        out["ambiguity"] = wide_json(ad.ambiguity);
        out["deficiency"] = wide_json(ad.deficiency);
    } else {
        out["ambiguity"] = nullptr;
        out["deficiency"] = nullptr;
    }
    out["identities_ok"] = ok;
    return out;
}

std::string spectrum_csv(const DifferentialSpectrum& spectrum)
{
    std::string out = "i,omega_i\n";
    for (const auto& [i, c] : spectrum.omega)
        out += std::to_string(i) + "," + std::to_string(c) + "\n";
    return out;
}

json prediction_json(const SpectrumPrediction& prediction)
{
    json out = {
        {"tag", prediction.tag ? to_string(*prediction.tag) : "GOLD_FAMILY"},
        {"kind", prediction.kind == PredictionKind::Exact ? "exact" : "constraints"},
        {"p", prediction.p},
        {"n", prediction.n},
        {"q", prediction.q},
    };
    if (prediction.kind == PredictionKind::Exact) {
        json omega = json::array();
        for (const auto& [i, c] : prediction.exact_omega)
            omega.push_back({i, c});
        out["omega"] = omega;
    } else {
        out["bound"] = prediction.bound;
        out["forced_zero"] = prediction.forced_zero;
        out["omega_1"] = prediction.omega_1;
        out["omega_p"] = prediction.omega_p;
    }
    return out;
}

json lemma_json(const lab::LemmaReport& report)
{
    json params = {{"p", report.p}, {"m", report.m}, {"n", report.n}};
    if (report.t)
        params["t"] = *report.t;
    json counterexamples = json::array();
    for (const auto& witness : report.counterexamples) {
        json w = json::object();
        for (const auto& [k, v] : witness)
            w[k] = v;
        counterexamples.push_back(std::move(w));
    }
    json out = {
        {"lemma", report.lemma},
        {"params", params},
        {"verdict", lab::to_string(report.verdict)},
        {"counterexamples", counterexamples},
        {"stats", report.stats},
    };
    if (!report.note.empty())
        out["note"] = report.note;
    return out;
}

}  // namespace diffspec
