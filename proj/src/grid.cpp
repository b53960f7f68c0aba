#include "slovasc/grid.hpp"

#include "slovasc/errors.hpp"

namespace slovasc {

namespace {

void require_same_dims(const BinaryMask& a, const BinaryMask& b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
    }
}

template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
    require_same_dims(a, b);
    BinaryMask out(a.width(), a.height());
    auto pa = a.pixels();
    auto pb = b.pixels();
    auto po = out.pixels();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = op(pa[i] != 0, pb[i] != 0) ? 1 : 0;
    return out;
}

}  // namespace

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
}

bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
    require_same_dims(inner, outer);
    auto pi = inner.pixels();
    auto po = outer.pixels();
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] && !po[i]) return false;
    }
    return true;
}

}  // namespace slovasc
