#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "dcode/types.hpp"

namespace dcode {

/// States on the uniform grid t_n = n*k for n in [first(), last()].
///
/// Indices may be negative. Access outside the stored range throws
/// std::out_of_range; nothing is ever extrapolated or zero padded.
template <typename Scalar, int Dim = Eigen::Dynamic>
class GridSeq {
 public:
  using StateType = State<Scalar, Dim>;
  using Block = StateBlock<Scalar, Dim>;

  GridSeq() = default;

  GridSeq(double step, Index base_index, Block values)
      : step_(step), base_(base_index), values_(std::move(values)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("GridSeq: step must be positive");
  }

  GridSeq(double step, Index base_index, Index count, Index dim)
      : GridSeq(step, base_index, Block::Zero(dim, count)) {}

  [[nodiscard]] double step() const noexcept { return step_; }
  [[nodiscard]] Index first() const noexcept { return base_; }
  [[nodiscard]] Index last() const noexcept { return base_ + values_.cols() - 1; }
  [[nodiscard]] Index size() const noexcept { return values_.cols(); }
  [[nodiscard]] Index dim() const noexcept { return values_.rows(); }
  [[nodiscard]] bool contains(Index n) const noexcept { return n >= first() && n <= last(); }
  [[nodiscard]] double time(Index n) const noexcept { return static_cast<double>(n) * step_; }

  [[nodiscard]] auto operator[](Index n) const { return values_.col(checked(n)); }
  [[nodiscard]] auto operator[](Index n) { return values_.col(checked(n)); }

  [[nodiscard]] const Block& values() const noexcept { return values_; }
  [[nodiscard]] Block& values() noexcept { return values_; }

  void require(Index lo, Index hi) const {
    if (lo < first() || hi > last()) {
      throw std::out_of_range("GridSeq: stencil [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] outside stored range [" + std::to_string(first()) + ", " +
                              std::to_string(last()) + "]");
    }
  }

 private:
  Index checked(Index n) const {
    if (!contains(n)) {
      throw std::out_of_range("GridSeq: index " + std::to_string(n) + " outside [" +
                              std::to_string(first()) + ", " + std::to_string(last()) + "]");
    }
    return n - base_;
  }

  double step_ = 1.0;
  Index base_ = 0;
  Block values_;
};

}  // namespace dcode
