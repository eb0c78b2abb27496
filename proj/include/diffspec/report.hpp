#pragma once

#include <string>

#include <json.hpp>

#include "diffspec/closed_form.hpp"
#include "diffspec/equation_lab.hpp"
#include "diffspec/spectrum.hpp"

namespace diffspec {

/// A 128-bit count as a JSON number when it fits in 64 bits, else as a
/// decimal string.
nlohmann::json wide_json(Wide value);

/// "[w0, w1, ...]" up to the uniformity. Spectra whose uniformity exceeds
/// `dense_limit` print as "{i: w_i, ...}" over the nonzero entries instead.
std::string bracket_sequence(const SparseCounts& omega, std::uint64_t dense_limit = 64);

/// "i:w_i;..." over the nonzero entries; comma-free for CSV cells.
std::string compact_sequence(const SparseCounts& omega);

nlohmann::json spectrum_json(const FieldCtx& field, const DifferentialSpectrum& spectrum);
/// Header "i,omega_i" then one row per nonzero component.
std::string spectrum_csv(const DifferentialSpectrum& spectrum);

nlohmann::json prediction_json(const SpectrumPrediction& prediction);
nlohmann::json lemma_json(const lab::LemmaReport& report);

}  // namespace diffspec
