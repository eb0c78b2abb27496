#pragma once

#include <map>

#include "diffspec/spectrum.hpp"

namespace testing {

/// Sparse counts without zero entries, for comparing against oracle maps.
inline diffspec::SparseCounts nonzero(const std::map<std::uint64_t, std::uint64_t>& m)
{
    diffspec::SparseCounts out;
    for (const auto& [i, c] : m)
        if (c != 0)
            out[i] = c;
    return out;
}

}  // namespace testing
