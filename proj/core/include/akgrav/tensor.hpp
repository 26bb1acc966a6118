#pragma once

#include <initializer_list>
#include <vector>

#include "akgrav/expr.hpp"

namespace akgrav {

enum class SlotSpace { H, V, Full };
enum class Variance { Up, Down };

struct Slot {
  SlotSpace space = SlotSpace::Full;
  Variance variance = Variance::Down;
};

enum class FrameTag { Coordinate, NAdapted };

// Dense indexed array of scalar expressions with per-slot typing. H slots run
// over 0..n-1, V slots over 0..m-1, Full slots over 0..n+m-1 (h first).
class TensorField {
public:
  TensorField() = default;
  TensorField(Chart chart, std::vector<Slot> slots, FrameTag frame);

  const Chart& chart() const { return chart_; }
  const std::vector<Slot>& slots() const { return slots_; }
  FrameTag frame() const { return frame_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  int dim(int slot) const;
  std::size_t size() const { return comp_.size(); }

  Expr& at(std::initializer_list<int> idx) { return comp_[offset(idx)]; }
  const Expr& at(std::initializer_list<int> idx) const { return comp_[offset(idx)]; }

  std::vector<Expr>& components() { return comp_; }
  const std::vector<Expr>& components() const { return comp_; }

private:
  std::size_t offset(std::initializer_list<int> idx) const;

  Chart chart_ = Chart::standard();
  std::vector<Slot> slots_;
  FrameTag frame_ = FrameTag::NAdapted;
  std::vector<Expr> comp_;
};

// max |component| at a point (memoized across components)
double max_abs_at(const TensorField& t, const Point& p);
double max_abs_at(const std::vector<Expr>& comps, const Point& p);

}  // namespace akgrav
