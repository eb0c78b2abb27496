#include "diffspec/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "diffspec/closed_form.hpp"
#include "diffspec/equation_lab.hpp"
#include "diffspec/errors.hpp"
#include "diffspec/number_theory.hpp"
#include "diffspec/poly.hpp"
#include "diffspec/report.hpp"

namespace diffspec::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::uint32_t p = 0;
    std::optional<unsigned> n;
    std::optional<unsigned> m;
    std::optional<std::uint64_t> d;
    std::optional<std::string> case_selector;
    std::optional<std::string> modulus;
    std::optional<std::string> m_range;
    unsigned threads = 1;
    std::uint64_t cap = std::uint64_t{1} << 24;
    bool override_cap = false;
    std::optional<std::string> out_path;
    std::string format;
};

struct Params {
    unsigned m;
    unsigned n;
};

unsigned n_for_case(const std::string& selector, unsigned m)
{
    if (selector == "n2m")
        return 2 * m;
    if (selector == "n2m1")
        return 2 * m - 1;
    throw InvalidArgument("--case must be n2m or n2m1, got '" + selector + "'");
}

// n from --n or from --m with --case (default n2m); m from --m or ceil(n/2).
Params resolve(const RunConfig& cfg)
{
    if (cfg.m && *cfg.m == 0)
        throw InvalidArgument("--m must be at least 1");
    if (cfg.n && *cfg.n == 0)
        throw InvalidArgument("--n must be at least 1");
    if (cfg.n && cfg.case_selector && cfg.m && n_for_case(*cfg.case_selector, *cfg.m) != *cfg.n)
        throw InvalidArgument("--n disagrees with --m and --case");
    if (cfg.n)
        return {cfg.m ? *cfg.m : (*cfg.n + 1) / 2, *cfg.n};
    if (!cfg.m)
        throw InvalidArgument("give --n, or --m with --case");
    return {*cfg.m, n_for_case(cfg.case_selector.value_or("n2m"), *cfg.m)};
}

std::uint64_t field_size(std::uint32_t p, unsigned n)
{
    auto q = nt::checked_pow(p, n);
    if (!q)
        throw InvalidArgument("p^n does not fit in 64 bits");
    return *q;
}

void enforce_cap(const RunConfig& cfg, std::uint64_t q)
{
    if (q > cfg.cap && !cfg.override_cap)
        throw CapExceeded("field size " + std::to_string(q) + " exceeds the sweep cap " + std::to_string(cfg.cap) +
                          " (raise --cap or pass --override-cap)");
}

SweepOptions sweep_options(const RunConfig& cfg)
{
    SweepOptions options;
    options.threads = std::max(1u, cfg.threads);
    options.sweep_cap = cfg.cap;
    options.override_cap = cfg.override_cap;
    return options;
}

FieldCtx make_field(const RunConfig& cfg, unsigned n)
{
    std::optional<std::vector<std::int64_t>> modulus;
    if (cfg.modulus)
        modulus = poly::parse_coefficients(*cfg.modulus);
    return build_field(cfg.p, n, modulus);
}

// Writes the artifact to --out when given (stdout then gets the summary),
// otherwise prints the artifact itself.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& artifact, const std::string& summary)
{
    if (!cfg.out_path) {
        out << artifact;
        return;
    }
    std::ofstream file(*cfg.out_path, std::ios::binary);
    if (!file)
        throw InvalidArgument("cannot open --out path " + *cfg.out_path);
    file << artifact;
    out << summary;
}

std::string ad_line(const AmbiguityDeficiencyReport& ad)
{
    return "ambiguity " + nt::to_decimal(ad.ambiguity) + " deficiency " + nt::to_decimal(ad.deficiency) + "\n";
}

std::string constraints_text(const SpectrumPrediction& pred)
{
    std::string text = "bound " + std::to_string(pred.bound) + "\nforced_zero";
    for (auto i : pred.forced_zero)
        text += " " + std::to_string(i);
    text += "\nomega_1 " + std::to_string(pred.omega_1) + "\nomega_" + std::to_string(pred.p) + " " +
            std::to_string(pred.omega_p) + "\n";
    return text;
}

std::string prediction_text(const SpectrumPrediction& pred)
{
    std::string text = std::string(to_string(*pred.tag)) + " q " + std::to_string(pred.q) + "\n";
    if (pred.kind == PredictionKind::Exact)
        return text + "exact " + bracket_sequence(pred.exact_omega) + "\n";
    return text + "constraints\n" + constraints_text(pred);
}

std::optional<AmbiguityDeficiencyReport> closed_ad(const SpectrumPrediction& pred, unsigned m)
{
    if (pred.tag == CaseTag::PG3_N2M_Q1MOD3 || pred.tag == CaseTag::PG3_N2M_Q2MOD3)
        return closed_ambiguity_deficiency(pred.p, m, *pred.tag);
    return std::nullopt;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out)
{
    const Params prm = resolve(cfg);
    const std::uint64_t d = cfg.d ? *cfg.d : family_exponent(cfg.p, prm.m);
    enforce_cap(cfg, field_size(cfg.p, prm.n));
    const FieldCtx field = make_field(cfg, prm.n);
    const auto spectrum = brute_spectrum(PowerMap(field, d), sweep_options(cfg));
    const bool ok = check_identities(spectrum);

    std::string summary = "spectrum " + bracket_sequence(spectrum.omega) + "\n";
    summary += "q " + std::to_string(spectrum.q) + " d " + std::to_string(d) + " uniformity " +
               std::to_string(spectrum.uniformity) + "\n";
    summary += ad_line(ambiguity_deficiency(spectrum));
    summary += std::string("identities ") + (ok ? "ok" : "FAILED") + "\n";

    std::string artifact = summary;
    if (cfg.format == "json")
        artifact = spectrum_json(field, spectrum).dump(2) + "\n";
    else if (cfg.format == "csv")
        artifact = spectrum_csv(spectrum);
    emit(cfg, out, artifact, summary);
    return ok ? kOk : kMismatch;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out)
{
    const Params prm = resolve(cfg);
    const auto pred = predict(cfg.p, prm.m, prm.n);
    const auto ad = closed_ad(pred, prm.m);

    std::string summary = prediction_text(pred);
    if (ad)
        summary += ad_line(*ad);
    std::string artifact = summary;
    if (cfg.format == "json") {
        json j = prediction_json(pred);
        j["m"] = prm.m;
        j["d"] = family_exponent(cfg.p, prm.m);
        if (ad) {
            j["ambiguity"] = wide_json(ad->ambiguity);
            j["deficiency"] = wide_json(ad->deficiency);
        }
        artifact = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        if (pred.kind != PredictionKind::Exact)
            throw InvalidArgument("csv output needs an exact prediction");
        artifact = "i,omega_i\n";
        for (const auto& [i, c] : pred.exact_omega)
            artifact += std::to_string(i) + "," + std::to_string(c) + "\n";
    }
    emit(cfg, out, artifact, summary);
    return kOk;
}

struct Verification {
    SpectrumPrediction prediction;
    DifferentialSpectrum spectrum;
    std::vector<std::string> diffs;
};

Verification verify_one(const RunConfig& cfg, unsigned m, unsigned n)
{
    Verification v{predict(cfg.p, m, n), {}, {}};
    enforce_cap(cfg, field_size(cfg.p, n));
    const FieldCtx field = make_field(cfg, n);
    v.spectrum = brute_spectrum(PowerMap(field, family_exponent(cfg.p, m)), sweep_options(cfg));
    v.diffs = compare_prediction(v.prediction, v.spectrum);
    if (auto closed = closed_ad(v.prediction, m)) {
        const auto brute = ambiguity_deficiency(v.spectrum);
        if (brute.ambiguity != closed->ambiguity)
            v.diffs.push_back("ambiguity: predicted " + nt::to_decimal(closed->ambiguity) + ", brute " +
                              nt::to_decimal(brute.ambiguity));
        if (brute.deficiency != closed->deficiency)
            v.diffs.push_back("deficiency: predicted " + nt::to_decimal(closed->deficiency) + ", brute " +
                              nt::to_decimal(brute.deficiency));
    }
    return v;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const Params prm = resolve(cfg);
    const auto v = verify_one(cfg, prm.m, prm.n);
    const bool ok = v.diffs.empty();

    std::string summary = prediction_text(v.prediction);
    summary += "brute " + bracket_sequence(v.spectrum.omega) + "\n";
    for (const auto& line : v.diffs)
        summary += "diff " + line + "\n";
    summary += ok ? "verified\n" : "mismatch\n";

    std::string artifact = summary;
    if (cfg.format == "json") {
        const FieldCtx field = make_field(cfg, prm.n);
        json j = {
            {"p", cfg.p},
            {"m", prm.m},
            {"n", prm.n},
            {"prediction", prediction_json(v.prediction)},
            {"brute", spectrum_json(field, v.spectrum)},
            {"diffs", v.diffs},
            {"verified", ok},
        };
        artifact = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        artifact = "field,value\nverified," + std::string(ok ? "true" : "false") + "\n";
        for (const auto& line : v.diffs)
            artifact += "diff,\"" + line + "\"\n";
    }
    emit(cfg, out, artifact, summary);
    return ok ? kOk : kMismatch;
}

int cmd_lemmas(const RunConfig& cfg, std::ostream& out)
{
    const Params prm = resolve(cfg);
    lab::SuiteOptions options;
    options.sweep = sweep_options(cfg);
    const auto reports = lab::run_lemma_suite(cfg.p, prm.m, prm.n, options);

    bool ok = true;
    std::string jsonl;
    std::string summary;
    for (const auto& r : reports) {
        ok = ok && r.verdict != lab::Verdict::Fail;
        jsonl += lemma_json(r).dump() + "\n";
        summary += r.lemma + " " + lab::to_string(r.verdict);
        for (const auto& [k, value] : r.stats)
            summary += " " + k + "=" + std::to_string(value);
        if (!r.note.empty())
            summary += " (" + r.note + ")";
        summary += "\n";
    }
    emit(cfg, out, cfg.format == "table" ? summary : jsonl, summary);
    return ok ? kOk : kMismatch;
}

std::pair<unsigned, unsigned> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos)
            throw std::invalid_argument("missing colon");
        std::size_t used_a = 0, used_b = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const unsigned long lo = std::stoul(a, &used_a), hi = std::stoul(b, &used_b);
        if (used_a != a.size() || used_b != b.size() || lo == 0 || lo > hi || hi > 64)
            throw std::invalid_argument("bad bounds");
        return {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
    } catch (const std::exception&) {
        throw InvalidArgument("--m-range must look like a:b with 1 <= a <= b <= 64, got '" + text + "'");
    }
}

int cmd_scan(const RunConfig& cfg, std::ostream& out)
{
    if (!cfg.m_range)
        throw InvalidArgument("scan needs --m-range a:b");
    const auto [lo, hi] = parse_range(*cfg.m_range);
    const std::string selector = cfg.case_selector.value_or("n2m");
    for (unsigned m = lo; m <= hi; ++m) {
        classify(cfg.p, m, n_for_case(selector, m));
        enforce_cap(cfg, field_size(cfg.p, n_for_case(selector, m)));
    }

    bool all_ok = true;
    std::string csv = "p,m,n,d,q,tag,spectrum,uniformity,ambiguity,deficiency,verified\n";
    json rows = json::array();
    for (unsigned m = lo; m <= hi; ++m) {
        const unsigned n = n_for_case(selector, m);
        const auto v = verify_one(cfg, m, n);
        const bool ok = v.diffs.empty();
        all_ok = all_ok && ok;
        const auto ad = ambiguity_deficiency(v.spectrum);
        const std::uint64_t d = family_exponent(cfg.p, m);
        const std::string tag = to_string(*v.prediction.tag);
        csv += std::to_string(cfg.p) + "," + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(d) +
               "," + std::to_string(v.spectrum.q) + "," + tag + "," + compact_sequence(v.spectrum.omega) + "," +
               std::to_string(v.spectrum.uniformity) + "," + nt::to_decimal(ad.ambiguity) + "," +
               nt::to_decimal(ad.deficiency) + "," + (ok ? "true" : "false") + "\n";
        json omega = json::array();
        for (const auto& [i, c] : v.spectrum.omega)
            omega.push_back({i, c});
        rows.push_back({{"p", cfg.p}, {"m", m}, {"n", n}, {"d", d}, {"q", v.spectrum.q}, {"tag", tag},
                        {"omega", omega}, {"uniformity", v.spectrum.uniformity},
                        {"ambiguity", wide_json(ad.ambiguity)}, {"deficiency", wide_json(ad.deficiency)},
                        {"verified", ok}, {"diffs", v.diffs}});
    }
    emit(cfg, out, cfg.format == "json" ? rows.dump(2) + "\n" : csv, csv);
    return all_ok ? kOk : kMismatch;
}

void add_common(CLI::App* sub, RunConfig& cfg, const std::string& default_format)
{
    cfg.format = default_format;
    sub->add_option("--p", cfg.p, "Characteristic (prime)")->required();
    sub->add_option("--threads", cfg.threads, "Worker threads for the sweep")->capture_default_str();
    sub->add_option("--cap", cfg.cap, "Largest field size to sweep")->capture_default_str();
    sub->add_flag("--override-cap", cfg.override_cap, "Sweep even above --cap");
    sub->add_option("--out", cfg.out_path, "Write the artifact to this file");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
}

// --out x.json / x.csv without --format picks the format from the extension.
void infer_format(const CLI::App* sub, RunConfig& cfg)
{
    if (!sub->parsed() || sub->count("--format") != 0 || !cfg.out_path)
        return;
    const auto ext = std::filesystem::path(*cfg.out_path).extension().string();
    if (ext == ".json")
        cfg.format = "json";
    else if (ext == ".csv")
        cfg.format = "csv";
}

void add_case(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--case", cfg.case_selector, "n2m (n = 2m) or n2m1 (n = 2m-1)")
        ->check(CLI::IsMember({"n2m", "n2m1"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Differential spectra of power maps over finite fields", "diffspec"};
    app.require_subcommand(1);

    RunConfig spectrum_cfg, predict_cfg, verify_cfg, lemmas_cfg, scan_cfg;

    auto* spectrum = app.add_subcommand("spectrum", "Brute-force differential spectrum of x^d");
    add_common(spectrum, spectrum_cfg, "table");
    spectrum->add_option("--n", spectrum_cfg.n, "Extension degree");
    spectrum->add_option("--m", spectrum_cfg.m, "Half degree; d defaults to p^m + 2");
    spectrum->add_option("--d", spectrum_cfg.d, "Exponent");
    spectrum->add_option("--modulus", spectrum_cfg.modulus, "Modulus coefficients, constant term first");
    add_case(spectrum, spectrum_cfg);

    auto* predict = app.add_subcommand("predict", "Closed-form spectrum of x^{p^m+2}");
    add_common(predict, predict_cfg, "table");
    predict->add_option("--m", predict_cfg.m, "Half degree")->required();
    predict->add_option("--n", predict_cfg.n, "Extension degree (2m or 2m-1)");
    add_case(predict, predict_cfg);

    auto* verify = app.add_subcommand("verify", "Brute force against the closed form");
    add_common(verify, verify_cfg, "table");
    verify->add_option("--m", verify_cfg.m, "Half degree")->required();
    verify->add_option("--n", verify_cfg.n, "Extension degree (2m or 2m-1)");
    verify->add_option("--modulus", verify_cfg.modulus, "Modulus coefficients, constant term first");
    add_case(verify, verify_cfg);

    auto* lemmas = app.add_subcommand("lemmas", "Run the equation checks, one JSON report per line");
    add_common(lemmas, lemmas_cfg, "json");
    lemmas->add_option("--m", lemmas_cfg.m, "Half degree");
    lemmas->add_option("--n", lemmas_cfg.n, "Extension degree (2m or 2m-1)");
    add_case(lemmas, lemmas_cfg);

    auto* scan = app.add_subcommand("scan", "Verify a range of m, one CSV row each");
    add_common(scan, scan_cfg, "csv");
    scan->add_option("--m-range", scan_cfg.m_range, "Inclusive range a:b")->required();
    scan->add_option("--modulus", scan_cfg.modulus, "Modulus coefficients, constant term first");
    add_case(scan, scan_cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        for (auto [sub, cfg] : {std::pair{spectrum, &spectrum_cfg}, std::pair{predict, &predict_cfg},
                                std::pair{verify, &verify_cfg}, std::pair{lemmas, &lemmas_cfg},
                                std::pair{scan, &scan_cfg}})
            infer_format(sub, *cfg);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidArgument;
    }

    try {
        if (spectrum->parsed())
            return cmd_spectrum(spectrum_cfg, out);
        if (predict->parsed())
            return cmd_predict(predict_cfg, out);
        if (verify->parsed())
            return cmd_verify(verify_cfg, out);
        if (lemmas->parsed())
            return cmd_lemmas(lemmas_cfg, out);
        if (scan->parsed()) {
            if (scan_cfg.modulus)
                throw InvalidArgument("--modulus applies to a single field; scan builds one field per m");
            return cmd_scan(scan_cfg, out);
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidArgument;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const VerificationFailure& e) {
        err << "verification failure: " << e.what() << "\n";
        return kMismatch;
    }
    return kInvalidArgument;
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace diffspec::cli
