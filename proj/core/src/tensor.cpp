#include "akgrav/tensor.hpp"

#include <cmath>

namespace akgrav {

TensorField::TensorField(Chart chart, std::vector<Slot> slots, FrameTag frame)
    : chart_(std::move(chart)), slots_(std::move(slots)), frame_(frame) {
  std::size_t total = 1;
  for (int s = 0; s < rank(); ++s) total *= static_cast<std::size_t>(dim(s));
  comp_.assign(total, Expr::number(0.0));
}

int TensorField::dim(int slot) const {
  switch (slots_[static_cast<std::size_t>(slot)].space) {
    case SlotSpace::H: return chart_.n();
    case SlotSpace::V: return chart_.m();
    case SlotSpace::Full: return chart_.dim();
  }
  return 0;
}

std::size_t TensorField::offset(std::initializer_list<int> idx) const {
  std::size_t off = 0;
  int s = 0;
  for (int i : idx) {
    off = off * static_cast<std::size_t>(dim(s)) + static_cast<std::size_t>(i);
    ++s;
  }
  return off;
}

double max_abs_at(const TensorField& t, const Point& p) {
  return max_abs_at(t.components(), p);
}

double max_abs_at(const std::vector<Expr>& comps, const Point& p) {
  EvalCache cache(p);
  double mx = 0.0;
  for (const Expr& e : comps) mx = std::max(mx, std::abs(eval(e, cache)));
  return mx;
}

}  // namespace akgrav
