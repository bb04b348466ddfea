#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>

#include "ectdim/dimensions.hpp"
#include "support/fixtures.hpp"

using namespace ectdim::dims;

namespace {

/// Independent 3x3 determinant on exact integer fractions (num/den pairs),
/// expanded by cofactors; used as the oracle for singularity checks.
long long det3_numerator(const long long m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

const Rational& exponent_of(const PiGroup& g, const std::string& name) {
    static const Rational zero(0);
    auto it = g.exponents.find(name);
    return it == g.exponents.end() ? zero : it->second;
}

}  // namespace

TEST_CASE("repeating set {R, E, omega} is valid for the RLC system") {
    auto sys = fixtures::rlc_system();
    auto report = check_repeating_set(sys);
    CHECK(report.ok);
    CHECK(report.violation.empty());
}

TEST_CASE("repeating set {R, L, omega} is singular (R/(L omega) is dimensionless)") {
    auto sys = fixtures::rlc_system();
    sys.repeating = {"R", "L", "omega"};

    // oracle: columns R, L, omega over (A, V, T)
    const long long m[3][3] = {{-1, -1, 0}, {1, 1, 0}, {0, 1, -1}};
    CHECK(det3_numerator(m) == 0);

    auto report = check_repeating_set(sys);
    CHECK(!report.ok);
    CHECK(report.violation.find("dimensionless") != std::string::npos);
    CHECK_THROWS_AS(derive_pi_groups(sys), std::invalid_argument);
}

TEST_CASE("repeating set containing the dependent variable is rejected") {
    auto sys = fixtures::rlc_system();
    sys.repeating = {"R", "E", "I"};
    auto report = check_repeating_set(sys);
    CHECK(!report.ok);
    CHECK(report.violation.find("dependent") != std::string::npos);
}

TEST_CASE("repeating set arity and name errors") {
    auto sys = fixtures::rlc_system();
    sys.repeating = {"R", "E"};
    CHECK_THROWS_AS(check_repeating_set(sys), std::invalid_argument);
    sys.repeating = {"R", "E", "nope"};
    CHECK_THROWS_AS(check_repeating_set(sys), std::invalid_argument);
}

TEST_CASE("RLC pi groups match the known closed forms") {
    auto sys = fixtures::rlc_system();
    auto groups = derive_pi_groups(sys);
    REQUIRE(groups.size() == 3);  // p = n - k = 6 - 3

    // pi_1 = R I / E
    CHECK(groups[0].anchor == "I");
    CHECK(exponent_of(groups[0], "I") == Rational(1));
    CHECK(exponent_of(groups[0], "R") == Rational(1));
    CHECK(exponent_of(groups[0], "E") == Rational(-1));
    CHECK(exponent_of(groups[0], "omega") == Rational(0));

    // pi_2 = omega L / R
    CHECK(groups[1].anchor == "L");
    CHECK(exponent_of(groups[1], "L") == Rational(1));
    CHECK(exponent_of(groups[1], "omega") == Rational(1));
    CHECK(exponent_of(groups[1], "R") == Rational(-1));

    // pi_3 = omega R C; the reciprocal 1/(omega R C) is the same group up to
    // the free presentation choice
    CHECK(groups[2].anchor == "C");
    CHECK(exponent_of(groups[2], "C") == Rational(1));
    CHECK(exponent_of(groups[2], "omega") == Rational(1));
    CHECK(exponent_of(groups[2], "R") == Rational(1));
    CHECK(exponent_of(groups[2], "E") == Rational(0));
}

TEST_CASE("eddy-current system yields the six expected groups") {
    auto sys = fixtures::ect_system();
    auto report = check_repeating_set(sys);
    CHECK(report.ok);

    auto groups = derive_pi_groups(sys);
    REQUIRE(groups.size() == 6);  // p = 9 - 3

    // dZm nu0 / (omega D)
    CHECK(groups[0].anchor == "dZm");
    CHECK(exponent_of(groups[0], "dZm") == Rational(1));
    CHECK(exponent_of(groups[0], "nu0") == Rational(1));
    CHECK(exponent_of(groups[0], "omega") == Rational(-1));
    CHECK(exponent_of(groups[0], "D") == Rational(-1));

    // omega sigma D^2 / nu0, presented as sqrt(./2) = D sqrt(omega sigma / 2 nu0)
    CHECK(groups[1].anchor == "sigma");
    CHECK(exponent_of(groups[1], "sigma") == Rational(1));
    CHECK(exponent_of(groups[1], "omega") == Rational(1));
    CHECK(exponent_of(groups[1], "D") == Rational(2));
    CHECK(exponent_of(groups[1], "nu0") == Rational(-1));
    CHECK(groups[1].transform == PresentationTransform::sqrt_half);

    // dh / D and l0 / D
    CHECK(exponent_of(groups[2], "dh") == Rational(1));
    CHECK(exponent_of(groups[2], "D") == Rational(-1));
    CHECK(exponent_of(groups[3], "l0") == Rational(1));
    CHECK(exponent_of(groups[3], "D") == Rational(-1));

    // already-dimensionless quantities pass through as their own groups
    CHECK(groups[4].exponents ==
          std::map<std::string, Rational>{{"t", Rational(1)}});
    CHECK(groups[5].exponents ==
          std::map<std::string, Rational>{{"theta", Rational(1)}});
}

TEST_CASE("k = 0 basis: every quantity is its own group") {
    DimensionalSystem sys;
    sys.basis = {};
    for (const char* name : {"x", "y", "z"}) {
        QuantitySpec q;
        q.name = name;
        sys.quantities.push_back(std::move(q));
    }
    sys.repeating = {};
    CHECK(check_repeating_set(sys).ok);
    auto groups = derive_pi_groups(sys);
    REQUIRE(groups.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(groups[i].exponents.size() == 1);
        CHECK(exponent_of(groups[i], sys.quantities[i].name) == Rational(1));
    }
}

TEST_CASE("derived groups are exactly dimensionless and anchored once") {
    for (const auto& sys : {fixtures::rlc_system(), fixtures::ect_system()}) {
        auto groups = derive_pi_groups(sys);
        for (const auto& g : groups) {
            CHECK(group_dimension(sys, g).is_zero());
        }
        // each non-repeating quantity carries exponent 1 in exactly one group
        for (const auto& q : sys.quantities) {
            bool repeating = false;
            for (const auto& r : sys.repeating) repeating |= (r == q.name);
            if (repeating) continue;
            int carrier = 0;
            for (const auto& g : groups) {
                if (exponent_of(g, q.name) == Rational(1) && g.anchor == q.name) ++carrier;
                if (g.anchor != q.name) CHECK(exponent_of(g, q.name) == Rational(0));
            }
            CHECK(carrier == 1);
        }
    }
}

TEST_CASE("randomized systems: count, dimensionlessness, uniqueness") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> exp_num(-3, 3);
    std::uniform_int_distribution<int> exp_den(1, 2);
    int built = 0;
    for (int trial = 0; trial < 200 && built < 50; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t n = k + 1 + rng() % 4;
        DimensionalSystem sys;
        for (std::size_t b = 0; b < k; ++b) sys.basis.push_back("D" + std::to_string(b));
        for (std::size_t i = 0; i < n; ++i) {
            QuantitySpec q;
            q.name = "q" + std::to_string(i);
            for (std::size_t b = 0; b < k; ++b) {
                q.dimension.exponents.push_back(Rational(exp_num(rng), exp_den(rng)));
            }
            sys.quantities.push_back(std::move(q));
        }
        for (std::size_t i = 0; i < k; ++i) sys.repeating.push_back(sys.quantities[i].name);
        if (!check_repeating_set(sys).ok) continue;
        ++built;

        auto groups = derive_pi_groups(sys);
        CHECK(groups.size() == n - k);  // Buckingham count
        for (const auto& g : groups) {
            CHECK(group_dimension(sys, g).is_zero());
            CHECK(exponent_of(g, g.anchor) == Rational(1));
        }
    }
    CHECK(built >= 30);
}

TEST_CASE("pi group evaluation") {
    auto sys = fixtures::rlc_system();
    auto groups = derive_pi_groups(sys);

    std::map<std::string, std::complex<double>> values{
        {"R", 1.0}, {"E", 1.0}, {"I", 1.0}, {"omega", 3.0}, {"L", 2.0}, {"C", 5.0}};
    CHECK(std::abs(evaluate_pi_group(groups[0], values) - 1.0) < 1e-15);
    CHECK(std::abs(evaluate_pi_group(groups[1], values) - 6.0) < 1e-14);   // wL/R
    CHECK(std::abs(evaluate_pi_group(groups[2], values) - 15.0) < 1e-13);  // wRC

    SUBCASE("missing value") {
        values.erase("C");
        CHECK_THROWS_AS(evaluate_pi_group(groups[2], values), std::invalid_argument);
    }
    SUBCASE("zero base with negative exponent") {
        values["E"] = 0.0;
        CHECK_THROWS_AS(evaluate_pi_group(groups[0], values), std::domain_error);
    }
    SUBCASE("complex values flow through") {
        values["I"] = {0.0, 2.0};
        const auto v = evaluate_pi_group(groups[0], values);
        CHECK(std::abs(v - std::complex<double>(0.0, 2.0)) < 1e-15);
    }
}

TEST_CASE("sqrt-half presentation reproduces the ratio of probe size to skin depth") {
    auto sys = fixtures::ect_system();
    auto groups = derive_pi_groups(sys);
    const auto& pi2 = groups[1];

    const double mu0 = 4e-7 * 3.14159265358979323846;
    std::map<std::string, std::complex<double>> values{
        {"sigma", 35.0e6}, {"omega", 2.0 * 3.14159265358979323846 * 1000.0},
        {"D", 23.95e-3},   {"nu0", 1.0 / mu0}};
    const auto v = evaluate_pi_group(pi2, values);
    // D / skin depth at 1 kHz and 35 MS/m, from a hand evaluation
    CHECK(v.real() == doctest::Approx(8.9027).epsilon(2e-4));
    CHECK(v.imag() == doctest::Approx(0.0));

    // pi3 = dh / D from the bench plate and probe
    const auto& pi3 = groups[2];
    std::map<std::string, std::complex<double>> v3{{"dh", 2.03e-3}, {"D", 23.95e-3}};
    CHECK(evaluate_pi_group(pi3, v3).real() == doctest::Approx(0.084760).epsilon(1e-5));
}

TEST_CASE("reciprocal presentation transform") {
    PiGroup g;
    g.exponents["x"] = Rational(1);
    g.transform = PresentationTransform::reciprocal;
    std::map<std::string, std::complex<double>> values{{"x", 4.0}};
    CHECK(std::abs(evaluate_pi_group(g, values) - 0.25) < 1e-15);
    values["x"] = 0.0;
    CHECK_THROWS_AS(evaluate_pi_group(g, values), std::domain_error);
}

TEST_CASE("unit-rescaling invariance of evaluated groups") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> scale_dist(0.1, 10.0);
    std::uniform_real_distribution<double> value_dist(0.5, 5.0);

    for (const auto& sys : {fixtures::rlc_system(), fixtures::ect_system()}) {
        auto groups = derive_pi_groups(sys);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> unit_scale(sys.basis.size());
            for (auto& s : unit_scale) s = scale_dist(rng);

            std::map<std::string, std::complex<double>> values, scaled;
            for (const auto& q : sys.quantities) {
                const double v = value_dist(rng);
                double factor = 1.0;
                for (std::size_t b = 0; b < sys.basis.size(); ++b) {
                    factor *= std::pow(unit_scale[b], q.dimension.exponents[b].to_double());
                }
                values[q.name] = v;
                scaled[q.name] = v * factor;
            }
            for (const auto& g : groups) {
                const auto a = evaluate_pi_group(g, values);
                const auto b = evaluate_pi_group(g, scaled);
                CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
            }
        }
    }
}
