#pragma once

namespace heatrecon {

// K_z and its x-derivative for n = 1 in arithmetic R, through Faddeeva closed
// forms of the ball and exterior integrals. Arguments: a = Re z, bm = |Im z|,
// (y, s) = (x, t) relative to the singular point.
template <class R>
struct LineJet {
  R value;
  R dy;
};

template <class R>
LineJet<R> line_kernel_jet(const R& a, const R& bm, const R& y, const R& s);

}  // namespace heatrecon
