#include "ectdim/system_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ectdim::dims {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok.front() == '#') break;
        tokens.push_back(tok);
    }
    return tokens;
}

Role parse_role(const std::string& tok) {
    if (tok == "independent") return Role::independent;
    if (tok == "dependent") return Role::dependent;
    if (tok == "repeating-candidate") return Role::repeating_candidate;
    throw std::invalid_argument("unknown role '" + tok + "'");
}

PresentationTransform parse_transform(const std::string& tok) {
    if (tok == "identity") return PresentationTransform::identity;
    if (tok == "reciprocal") return PresentationTransform::reciprocal;
    if (tok == "sqrt_half") return PresentationTransform::sqrt_half;
    throw std::invalid_argument("unknown transform '" + tok + "'");
}

}  // namespace

DimensionalSystem parse_system(std::istream& in) {
    DimensionalSystem system;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& kind = tokens.front();
        try {
            if (kind == "basis") {
                system.basis.assign(tokens.begin() + 1, tokens.end());
            } else if (kind == "quantity") {
                if (system.basis.empty() && tokens.size() < 2) {
                    throw std::invalid_argument("quantity line before basis");
                }
                const std::size_t k = system.basis.size();
                if (tokens.size() < 2 + k) {
                    throw std::invalid_argument("quantity line needs a name and " +
                                                std::to_string(k) + " exponents");
                }
                QuantitySpec q;
                q.name = tokens[1];
                if (system.find(q.name) != nullptr) {
                    throw std::invalid_argument("duplicate quantity '" + q.name + "'");
                }
                for (std::size_t i = 0; i < k; ++i) {
                    q.dimension.exponents.push_back(Rational::parse(tokens[2 + i]));
                }
                if (tokens.size() > 2 + k) q.role = parse_role(tokens[2 + k]);
                if (tokens.size() > 3 + k) {
                    throw std::invalid_argument("trailing tokens on quantity line");
                }
                system.quantities.push_back(std::move(q));
            } else if (kind == "repeating") {
                system.repeating.assign(tokens.begin() + 1, tokens.end());
            } else if (kind == "transform") {
                if (tokens.size() != 3) {
                    throw std::invalid_argument("transform line needs: name transform");
                }
                if (system.find(tokens[1]) == nullptr) {
                    throw std::invalid_argument("transform for unknown quantity '" +
                                                tokens[1] + "'");
                }
                system.transforms[tokens[1]] = parse_transform(tokens[2]);
            } else {
                throw std::invalid_argument("unknown directive '" + kind + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("system definition line " +
                                        std::to_string(lineno) + ": " + e.what());
        }
    }
    return system;
}

DimensionalSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open system file '" + path + "'");
    return parse_system(in);
}

namespace {

std::string format_group(const DimensionalSystem& system, const PiGroup& g) {
    // repeating variables first, in repeating-set order, the scaled quantity
    // last: R^1 E^-1 I^1
    std::vector<std::string> order = system.repeating;
    for (const auto& q : system.quantities) {
        if (std::find(order.begin(), order.end(), q.name) == order.end()) {
            order.push_back(q.name);
        }
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& name : order) {
        auto it = g.exponents.find(name);
        if (it == g.exponents.end() || it->second.is_zero()) continue;
        if (!first) out << " ";
        out << name << "^" << it->second.str();
        first = false;
    }
    std::string monomial = first ? "1" : out.str();
    switch (g.transform) {
        case PresentationTransform::identity: return monomial;
        case PresentationTransform::reciprocal: return "1/(" + monomial + ")";
        case PresentationTransform::sqrt_half: return "sqrt((" + monomial + ")/2)";
    }
    return monomial;
}

}  // namespace

std::string format_pi_groups(const DimensionalSystem& system) {
    auto groups = derive_pi_groups(system);
    std::ostringstream out;
    std::size_t i = 1;
    for (const auto& g : groups) {
        out << "pi_" << i++ << " = " << format_group(system, g) << "\n";
    }
    return out.str();
}

}  // namespace ectdim::dims
