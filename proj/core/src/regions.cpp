#include "ectdim/regions.hpp"

#include <stdexcept>

namespace ectdim::inversion {

const char* region_name(Region r) {
    switch (r) {
        case Region::a: return "a";
        case Region::b: return "b";
        case Region::c: return "c";
        case Region::d: return "d";
        case Region::e: return "e";
        case Region::f: return "f";
        case Region::g: return "g";
        case Region::h: return "h";
        case Region::i: return "i";
    }
    return "?";
}

bool region_feasible(Region r) {
    return r == Region::d || r == Region::e || r == Region::h;
}

RegionLabel classify_region(double pi2, double pi3, double k, double blind_boundary) {
    if (!(pi2 > 0.0 && pi3 > 0.0)) {
        throw std::domain_error("classify_region requires positive pi2, pi3");
    }
    if (!(k > 1.0)) throw std::domain_error("classify_region requires k > 1");

    const double p23 = pi2 * pi3;
    const int row = (pi3 >= k) ? 0 : (pi3 <= 1.0 / k ? 2 : 1);
    const int col = (p23 >= blind_boundary) ? 2 : (p23 <= 1.0 / k ? 0 : 1);

    static constexpr Region table[3][3] = {
        {Region::a, Region::b, Region::c},
        {Region::d, Region::e, Region::f},
        {Region::g, Region::h, Region::i},
    };
    RegionLabel label;
    label.region = table[row][col];

    switch (label.region) {
        case Region::d:
        case Region::e:
        case Region::h:
            label.retrievable = {true, true, false};
            break;
        case Region::g:
            label.retrievable = {false, false, true};
            break;
        default:
            label.retrievable = {true, false, false};
            break;
    }
    return label;
}

}  // namespace ectdim::inversion
