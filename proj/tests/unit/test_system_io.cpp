#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "ectdim/system_io.hpp"

using namespace ectdim::dims;

namespace {

const char* kRlcText = R"(# RLC series circuit, frequency domain
basis A V T
quantity omega  0  0 -1
quantity E      0  1  0
quantity R     -1  1  0
quantity I      1  0  0  dependent
quantity L     -1  1  1
quantity C      1 -1  1
repeating R E omega
)";

}  // namespace

TEST_CASE("system file parses into the expected structure") {
    std::istringstream in(kRlcText);
    auto sys = parse_system(in);
    CHECK(sys.basis == std::vector<std::string>{"A", "V", "T"});
    REQUIRE(sys.quantities.size() == 6);
    CHECK(sys.quantities[3].name == "I");
    CHECK(sys.quantities[3].role == Role::dependent);
    CHECK(sys.quantities[2].dimension.exponents ==
          std::vector<Rational>{Rational(-1), Rational(1), Rational(0)});
    CHECK(sys.repeating == std::vector<std::string>{"R", "E", "omega"});
    CHECK(check_repeating_set(sys).ok);
}

TEST_CASE("fractional exponents and transforms parse") {
    std::istringstream in(R"(basis L T
quantity a 1/2 -3/2
quantity b 1 0
quantity c -1/2 3/2
repeating a b
transform c sqrt_half
)");
    auto sys = parse_system(in);
    CHECK(sys.quantities[0].dimension.exponents[0] == Rational(1, 2));
    CHECK(sys.quantities[0].dimension.exponents[1] == Rational(-3, 2));
    REQUIRE(sys.transforms.count("c") == 1);
    CHECK(sys.transforms.at("c") == PresentationTransform::sqrt_half);
}

TEST_CASE("format_pi_groups prints a stable form") {
    std::istringstream in(kRlcText);
    auto sys = parse_system(in);
    const std::string out = format_pi_groups(sys);
    CHECK(out == "pi_1 = R^1 E^-1 I^1\n"
                 "pi_2 = R^-1 omega^1 L^1\n"
                 "pi_3 = R^1 omega^1 C^1\n");
}

TEST_CASE("system file error reporting") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_system(in);
    };
    CHECK_THROWS_AS(parse("basis A\nquantity x 1 extra_role_tokens y z\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse("basis A\nquantity x\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("basis A\nquantity x 1\nquantity x 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("basis A\nquantity x 1 astronaut\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("nonsense A\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("basis A\ntransform y reciprocal\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_system("/nonexistent/path.sys"), std::invalid_argument);
}
