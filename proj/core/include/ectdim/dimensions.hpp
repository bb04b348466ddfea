#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ectdim/rational.hpp"

namespace ectdim::dims {

/// Exponents of a physical quantity over the fundamental dimensions of the
/// active basis, in basis order. Length always equals the basis size.
struct DimensionVector {
    std::vector<Rational> exponents;

    bool is_zero() const;
    friend bool operator==(const DimensionVector&, const DimensionVector&) = default;
};

enum class Role { independent, dependent, repeating_candidate };

struct QuantitySpec {
    std::string name;
    DimensionVector dimension;
    Role role = Role::independent;
};

/// Optional presentation transform applied on top of the canonical monomial.
/// Products, powers and ratios of dimensionless groups are themselves
/// dimensionless, so presentation is a free choice; the canonical derived
/// form always carries the non-repeating quantity with exponent +1.
enum class PresentationTransform {
    identity,
    reciprocal,  // x -> 1/x
    sqrt_half,   // x -> sqrt(x/2)
};

const char* transform_name(PresentationTransform t);

/// Dimensionless monomial over named quantities with exact rational
/// exponents. Only non-zero exponents are stored.
struct PiGroup {
    std::map<std::string, Rational> exponents;
    PresentationTransform transform = PresentationTransform::identity;

    /// Name of the quantity scaled by this group (exponent +1, non-repeating)
    /// when the group came out of derive_pi_groups.
    std::string anchor;

    /// Monomial in a stable textual form, e.g. "R^1 E^-1 I^1"; quantity order
    /// follows the order given at construction (system declaration order).
    std::string str() const;
};

struct DimensionalSystem {
    std::vector<std::string> basis;
    std::vector<QuantitySpec> quantities;
    std::vector<std::string> repeating;
    /// Presentation transforms, keyed by non-repeating quantity name.
    std::map<std::string, PresentationTransform> transforms;

    std::size_t basis_size() const { return basis.size(); }
    const QuantitySpec* find(const std::string& name) const;
};

struct RepeatingSetReport {
    bool ok = false;
    std::string violation;  // empty when ok
};

/// Validates the repeating-variable choice: the k x k exponent matrix of the
/// repeating variables must be invertible over the rationals (equivalently,
/// no nontrivial monomial product of them is dimensionless) and no repeating
/// variable may be a dependent variable.
/// Throws std::invalid_argument for unknown names and arity mismatches.
RepeatingSetReport check_repeating_set(const DimensionalSystem& system);

/// Derives the p = n - k dimensionless groups: one per non-repeating
/// quantity, in system declaration order, each carrying that quantity with
/// exponent +1 and the repeating variables with the exact rational exponents
/// solving the dimensionless condition.
/// Throws std::invalid_argument when check_repeating_set fails.
std::vector<PiGroup> derive_pi_groups(const DimensionalSystem& system);

/// Weighted sum of dimension vectors of the group's quantities; the zero
/// vector iff the group is dimensionless. Exact arithmetic.
DimensionVector group_dimension(const DimensionalSystem& system, const PiGroup& group);

/// Evaluates the monomial (then the presentation transform) on the given
/// values. Complex bases with rational exponents use principal powers.
/// Missing value -> std::invalid_argument; zero base with negative exponent
/// (or reciprocal of zero) -> std::domain_error.
std::complex<double> evaluate_pi_group(
    const PiGroup& group,
    const std::map<std::string, std::complex<double>>& values);

}  // namespace ectdim::dims
