#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/spin.hpp"

namespace tfres {

enum class VerifySuite { oracles, clifford, degeneracy, all };

std::string_view to_string(VerifySuite suite);
VerifySuite parse_verify_suite(std::string_view text);

struct VerifyCheck {
    std::string name;
    double expected = 0.0;
    double got = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<VerifyCheck> checks;

    bool passed() const;
};

// Sine of the largest principal angle between the spans of two lists of
// orthonormal states (0 when the spans coincide).
double max_principal_angle_sine(const std::vector<StateVector>& a, const std::vector<StateVector>& b);

VerifyReport run_verify(VerifySuite suite, std::uint64_t seed);

// {suite, seed, [timestamp], passed, checks: [{name, expected, got, tol, pass}]}
std::string to_json(const VerifyReport& report, const std::optional<std::string>& timestamp = std::nullopt);

}  // namespace tfres
