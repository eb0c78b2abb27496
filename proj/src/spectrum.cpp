#include "diffspec/spectrum.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "diffspec/errors.hpp"
#include "diffspec/kernels.hpp"

namespace diffspec {

PowerMap::PowerMap(FieldCtx field, std::uint64_t d) : field_(std::move(field)), d_(d)
{
    if (d == 0)
        throw InvalidArgument("power map exponent must be at least 1");
}

FieldElement PowerMap::operator()(FieldElement x) const
{
    return x.is_zero() ? x : field_.pow_unsigned(x, d_);
}

FieldElement PowerMap::derivative(FieldElement x) const
{
    return field_.sub((*this)(field_.add_one(x)), (*this)(x));
}

FieldElement PowerMap::derivative(FieldElement x, FieldElement a) const
{
    return field_.sub((*this)(field_.add(x, a)), (*this)(x));
}

DifferentialSpectrum DifferentialSpectrum::from_counts(std::uint64_t q, std::uint64_t d, const SparseCounts& omega)
{
    DifferentialSpectrum s;
    s.q = q;
    s.d = d;
    for (const auto& [i, count] : omega) {
        if (count != 0) {
            s.omega[i] = count;
            s.uniformity = std::max(s.uniformity, i);
        }
    }
    return s;
}

std::uint64_t DifferentialSpectrum::at(std::uint64_t i) const
{
    auto it = omega.find(i);
    return it == omega.end() ? 0 : it->second;
}

std::vector<std::uint64_t> DifferentialSpectrum::sequence() const
{
    std::vector<std::uint64_t> out(uniformity + 1, 0);
    for (const auto& [i, count] : omega)
        out[i] = count;
    return out;
}

std::uint64_t delta_b(const PowerMap& map, FieldElement b)
{
    const auto& field = map.field();
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < field.q(); ++x) {
        if (map.derivative(FieldElement{x}) == b)
            ++count;
    }
    return count;
}

namespace {

constexpr std::uint32_t kBlock = 4096;

unsigned effective_workers(const SweepOptions& options, std::uint64_t keys, std::uint64_t work)
{
    std::uint64_t workers = std::max(1u, options.threads);
    const std::uint64_t per_worker = std::max<std::uint64_t>(1, keys * sizeof(std::uint32_t));
    workers = std::min(workers, std::max<std::uint64_t>(1, options.histogram_budget_bytes / per_worker));
    workers = std::min(workers, std::max<std::uint64_t>(1, work / kBlock));
    return static_cast<unsigned>(workers);
}

// Runs body(begin, end, counts) over `workers` contiguous slices of [0, work)
// and sums the partial histograms. Summation is exact, so the result does not
// depend on the worker count or scheduling.
std::vector<std::uint32_t> parallel_histogram(
    std::uint64_t keys, std::uint64_t work, unsigned workers,
    const std::function<void(std::uint64_t, std::uint64_t, std::vector<std::uint32_t>&)>& body)
{
    std::vector<std::vector<std::uint32_t>> partial(workers);
    auto run = [&](unsigned w) {
        partial[w].assign(keys, 0);
        const std::uint64_t begin = work * w / workers;
        const std::uint64_t end = work * (w + 1) / workers;
        body(begin, end, partial[w]);
    };
    if (workers == 1) {
        run(0);
        return std::move(partial[0]);
    }
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }
    std::vector<std::uint32_t> merged = std::move(partial[0]);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::uint64_t begin = keys * w / workers;
                const std::uint64_t end = keys * (w + 1) / workers;
                for (unsigned src = 1; src < workers; ++src) {
                    const auto& part = partial[src];
                    for (std::uint64_t k = begin; k < end; ++k)
                        merged[k] += part[k];
                }
            });
        }
    }
    return merged;
}

SparseCounts multiplicities(std::uint64_t q, const std::vector<std::uint32_t>& counts)
{
    SparseCounts omega;
    std::uint64_t attained = 0;
    for (std::uint32_t c : counts) {
        if (c != 0) {
            ++omega[c];
            ++attained;
        }
    }
    if (attained < q)
        omega[0] = q - attained;
    return omega;
}

}  // namespace

DerivativeCounts::DerivativeCounts(PowerMap map, bool log_keyed, std::vector<std::uint32_t> counts,
                                   unsigned workers)
    : map_(std::move(map)), log_keyed_(log_keyed), counts_(std::move(counts)), workers_(workers)
{
}

DerivativeCounts DerivativeCounts::sweep(const PowerMap& map, const SweepOptions& options)
{
    const FieldCtx& field = map.field();
    const std::uint64_t q = field.q();
    if (q > options.sweep_cap && !options.override_cap)
        throw CapExceeded("field size " + std::to_string(q) + " exceeds sweep cap " +
                          std::to_string(options.sweep_cap));

    if (field.has_tables()) {
        const auto N = static_cast<std::uint32_t>(q - 1);
        kernels::DerivativeParams params;
        params.zech_plus = field.zech_plus_table().data();
        params.order = N;
        params.half_log = field.p() == 2 ? 0 : N / 2;
        params.exponent = static_cast<std::uint32_t>(map.exponent() % N);
        // x = -1: 0 - (-1)^d = (-1)^{d+1}
        params.key_minus_one = map.exponent() % 2 == 0 ? params.half_log : 0;

        const unsigned workers = effective_workers(options, q, N);
        auto counts = parallel_histogram(q, N, workers, [&](std::uint64_t begin, std::uint64_t end, auto& hist) {
            std::vector<std::uint32_t> keys(kBlock);
            for (std::uint64_t i = begin; i < end; i += kBlock) {
                const auto stop = static_cast<std::uint32_t>(std::min<std::uint64_t>(end, i + kBlock));
                kernels::derivative_keys(params, static_cast<std::uint32_t>(i), stop, keys.data());
                for (std::uint32_t j = 0; j < stop - i; ++j)
                    ++hist[keys[j]];
            }
        });
        ++counts[0];  // x = 0: 1^d - 0 = 1 = alpha^0
        return DerivativeCounts(map, true, std::move(counts), workers);
    }

    const unsigned workers = effective_workers(options, q, q);
    auto counts = parallel_histogram(q, q, workers, [&](std::uint64_t begin, std::uint64_t end, auto& hist) {
        for (std::uint64_t x = begin; x < end; ++x)
            ++hist[map.derivative(FieldElement{x}).index()];
    });
    return DerivativeCounts(map, false, std::move(counts), workers);
}

std::uint64_t DerivativeCounts::key_of(FieldElement b) const
{
    const FieldCtx& field = map_.field();
    field.element(b.index());
    if (!log_keyed_)
        return b.index();
    return b.is_zero() ? field.q() - 1 : field.log(b);
}

std::uint64_t DerivativeCounts::at(FieldElement b) const
{
    return counts_[key_of(b)];
}

std::uint64_t DerivativeCounts::at(FieldElement a, FieldElement b) const
{
    if (a.is_zero())
        return b.is_zero() ? map_.field().q() : 0;
    return at(map_.field().div(b, map_(a)));
}

DifferentialSpectrum DerivativeCounts::spectrum() const
{
    const std::uint64_t q = map_.field().q();
    return DifferentialSpectrum::from_counts(q, map_.exponent(), multiplicities(q, counts_));
}

DifferentialSpectrum brute_spectrum(const PowerMap& map, const SweepOptions& options)
{
    auto spectrum = DerivativeCounts::sweep(map, options).spectrum();
    if (!check_identities(spectrum))
        throw VerificationFailure("brute spectrum violates the counting identities");
    return spectrum;
}

DifferentialSpectrum reference_spectrum(const PowerMap& map)
{
    const FieldCtx& field = map.field();
    const std::uint64_t q = field.q();
    const std::uint64_t d = map.exponent();
    auto eval = [&](FieldElement x) { return x.is_zero() ? x : field.poly_pow(x, d % (q - 1)); };
    std::vector<std::uint32_t> counts(q, 0);
    for (std::uint64_t i = 0; i < q; ++i) {
        const FieldElement x{i};
        const FieldElement v = field.poly_add(eval(field.add_one(x)), field.poly_neg(eval(x)));
        ++counts[v.index()];
    }
    return DifferentialSpectrum::from_counts(q, d, multiplicities(q, counts));
}

bool full_ddt_check(const PowerMap& map, std::uint64_t cap)
{
    const FieldCtx& field = map.field();
    const std::uint64_t q = field.q();
    if (q > cap)
        throw CapExceeded("full DDT check limited to q <= " + std::to_string(cap));
    std::vector<FieldElement> values(q);
    for (std::uint64_t x = 0; x < q; ++x)
        values[x] = map(FieldElement{x});

    auto row_profile = [&](FieldElement a) {
        std::vector<std::uint32_t> row(q, 0);
        for (std::uint64_t x = 0; x < q; ++x) {
            const FieldElement shifted = field.add(FieldElement{x}, a);
            ++row[field.sub(values[shifted.index()], values[x]).index()];
        }
        std::sort(row.begin(), row.end());
        return row;
    };

    const auto reference = row_profile(field.one());
    for (std::uint64_t a = 2; a < q; ++a) {
        if (row_profile(FieldElement{a}) != reference)
            return false;
    }
    return true;
}

bool check_identities(const DifferentialSpectrum& spectrum)
{
    Wide total = 0, weighted = 0;
    for (const auto& [i, count] : spectrum.omega) {
        total += count;
        weighted += static_cast<Wide>(i) * count;
    }
    return total == spectrum.q && weighted == spectrum.q;
}

AmbiguityDeficiencyReport ambiguity_deficiency(const DifferentialSpectrum& spectrum)
{
    if (!check_identities(spectrum))
        throw InvalidArgument("ambiguity/deficiency: spectrum fails the counting identities");
    const Wide rows = spectrum.q - 1;
    Wide pairs = 0;
    for (const auto& [i, count] : spectrum.omega) {
        if (i >= 2)
            pairs += static_cast<Wide>(count) * (static_cast<Wide>(i) * (i - 1) / 2);
    }
    return {rows * pairs, rows * spectrum.at(0)};
}

}  // namespace diffspec
