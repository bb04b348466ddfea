#include "ectdim/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ectdim::dims {

namespace {

/// Determinant of a square rational matrix by fraction-free (Bareiss)
/// elimination. Rows are first scaled to a common integer form; the
/// elimination itself then runs on __int128 without introducing fractions.
Rational bareiss_determinant(std::vector<std::vector<Rational>> m) {
    const std::size_t k = m.size();
    if (k == 0) return Rational(1);

    std::vector<std::vector<__int128>> a(k, std::vector<__int128>(k));
    Rational scale(1);
    for (std::size_t i = 0; i < k; ++i) {
        std::int64_t lcm = 1;
        for (std::size_t j = 0; j < k; ++j) {
            lcm = std::lcm(lcm, m[i][j].den());
        }
        scale /= Rational(lcm);
        for (std::size_t j = 0; j < k; ++j) {
            a[i][j] = static_cast<__int128>(m[i][j].num()) * (lcm / m[i][j].den());
        }
    }

    __int128 sign = 1;
    __int128 prev = 1;
    for (std::size_t col = 0; col + 1 < k; ++col) {
        if (a[col][col] == 0) {
            std::size_t pivot = col + 1;
            while (pivot < k && a[pivot][col] == 0) ++pivot;
            if (pivot == k) return Rational(0);
            std::swap(a[col], a[pivot]);
            sign = -sign;
        }
        for (std::size_t row = col + 1; row < k; ++row) {
            for (std::size_t j = col + 1; j < k; ++j) {
                a[row][j] = (a[row][j] * a[col][col] - a[row][col] * a[col][j]) / prev;
            }
            a[row][col] = 0;
        }
        prev = a[col][col];
    }

    __int128 det = sign * a[k - 1][k - 1];
    bool neg = det < 0;
    if (neg) det = -det;
    if (det > static_cast<__int128>(std::numeric_limits<std::int64_t>::max())) {
        throw std::overflow_error("determinant overflow");
    }
    return scale * Rational(neg ? -static_cast<std::int64_t>(det)
                                : static_cast<std::int64_t>(det));
}

}  // namespace

bool DimensionVector::is_zero() const {
    return std::all_of(exponents.begin(), exponents.end(),
                       [](const Rational& r) { return r.is_zero(); });
}

const char* transform_name(PresentationTransform t) {
    switch (t) {
        case PresentationTransform::identity: return "identity";
        case PresentationTransform::reciprocal: return "reciprocal";
        case PresentationTransform::sqrt_half: return "sqrt_half";
    }
    return "?";
}

const QuantitySpec* DimensionalSystem::find(const std::string& name) const {
    for (const auto& q : quantities) {
        if (q.name == name) return &q;
    }
    return nullptr;
}

std::string PiGroup::str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, exp] : exponents) {
        if (exp.is_zero()) continue;
        if (!first) out << " ";
        out << name << "^" << exp.str();
        first = false;
    }
    std::string monomial = first ? "1" : out.str();
    switch (transform) {
        case PresentationTransform::identity: return monomial;
        case PresentationTransform::reciprocal: return "1/(" + monomial + ")";
        case PresentationTransform::sqrt_half: return "sqrt((" + monomial + ")/2)";
    }
    return monomial;
}

RepeatingSetReport check_repeating_set(const DimensionalSystem& system) {
    const std::size_t k = system.basis_size();
    for (const auto& q : system.quantities) {
        if (q.dimension.exponents.size() != k) {
            throw std::invalid_argument("quantity '" + q.name +
                                        "' has a dimension vector of wrong length");
        }
    }
    if (system.repeating.size() != k) {
        throw std::invalid_argument("repeating set must contain exactly " +
                                    std::to_string(k) + " quantities, got " +
                                    std::to_string(system.repeating.size()));
    }

    std::vector<const QuantitySpec*> rep;
    for (const auto& name : system.repeating) {
        const QuantitySpec* q = system.find(name);
        if (q == nullptr) {
            throw std::invalid_argument("unknown repeating quantity '" + name + "'");
        }
        rep.push_back(q);
    }

    for (const QuantitySpec* q : rep) {
        if (q->role == Role::dependent) {
            return {false, "repeating variable '" + q->name +
                               "' is a dependent variable of the problem"};
        }
    }

    if (k == 0) return {true, {}};

    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) m[i][j] = rep[j]->dimension.exponents[i];
    }
    if (bareiss_determinant(m).is_zero()) {
        return {false,
                "repeating variables admit a dimensionless monomial product "
                "(singular exponent matrix)"};
    }
    return {true, {}};
}

std::vector<PiGroup> derive_pi_groups(const DimensionalSystem& system) {
    RepeatingSetReport report = check_repeating_set(system);
    if (!report.ok) {
        throw std::invalid_argument("invalid repeating set: " + report.violation);
    }

    const std::size_t k = system.basis_size();
    std::vector<const QuantitySpec*> rep;
    for (const auto& name : system.repeating) rep.push_back(system.find(name));

    // Dimensionless condition for pi = prod_j rep_j^alpha_j * q:
    //   sum_j alpha_j * dim(rep_j) = -dim(q),
    // a k x k exact linear system solved per non-repeating quantity.
    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) m[i][j] = rep[j]->dimension.exponents[i];
    }
    const Rational det = k == 0 ? Rational(1) : bareiss_determinant(m);

    std::vector<PiGroup> groups;
    for (const auto& q : system.quantities) {
        if (std::find(system.repeating.begin(), system.repeating.end(), q.name) !=
            system.repeating.end()) {
            continue;
        }
        PiGroup group;
        group.anchor = q.name;
        group.exponents[q.name] = Rational(1);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<std::vector<Rational>> mj = m;
            for (std::size_t i = 0; i < k; ++i) mj[i][j] = -q.dimension.exponents[i];
            Rational alpha = bareiss_determinant(mj) / det;
            if (!alpha.is_zero()) group.exponents[rep[j]->name] = alpha;
        }
        if (auto it = system.transforms.find(q.name); it != system.transforms.end()) {
            group.transform = it->second;
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

DimensionVector group_dimension(const DimensionalSystem& system, const PiGroup& group) {
    DimensionVector sum;
    sum.exponents.assign(system.basis_size(), Rational(0));
    for (const auto& [name, exp] : group.exponents) {
        const QuantitySpec* q = system.find(name);
        if (q == nullptr) {
            throw std::invalid_argument("group references unknown quantity '" + name + "'");
        }
        for (std::size_t i = 0; i < sum.exponents.size(); ++i) {
            sum.exponents[i] += exp * q->dimension.exponents[i];
        }
    }
    return sum;
}

std::complex<double> evaluate_pi_group(
    const PiGroup& group, const std::map<std::string, std::complex<double>>& values) {
    std::complex<double> result(1.0, 0.0);
    for (const auto& [name, exp] : group.exponents) {
        auto it = values.find(name);
        if (it == values.end()) {
            throw std::invalid_argument("no value given for quantity '" + name + "'");
        }
        if (exp.is_zero()) continue;
        const std::complex<double> base = it->second;
        if (base == std::complex<double>(0.0, 0.0)) {
            if (exp < Rational(0)) {
                throw std::domain_error("zero base with negative exponent in pi group");
            }
            result = 0.0;
            continue;
        }
        if (exp.is_integer()) {
            // exact integer powers keep real inputs exactly real
            std::complex<double> p(1.0, 0.0);
            std::int64_t e = exp.num() < 0 ? -exp.num() : exp.num();
            for (std::int64_t i = 0; i < e; ++i) p *= base;
            result *= exp.num() < 0 ? 1.0 / p : p;
        } else {
            result *= std::pow(base, std::complex<double>(exp.to_double(), 0.0));
        }
    }
    switch (group.transform) {
        case PresentationTransform::identity:
            return result;
        case PresentationTransform::reciprocal:
            if (result == std::complex<double>(0.0, 0.0)) {
                throw std::domain_error("reciprocal transform of zero-valued group");
            }
            return 1.0 / result;
        case PresentationTransform::sqrt_half:
            return std::sqrt(result / 2.0);
    }
    return result;
}

}  // namespace ectdim::dims
