#pragma once

#include <stdexcept>
#include <string>

#include "dcode/grid_seq.hpp"
#include "dcode/scheme.hpp"

namespace dcode {

/// Discrete solution of one stage on [-ghost_left, n_steps + ghost_right].
template <typename Scalar, int Dim = Eigen::Dynamic>
struct Trajectory {
  using StateType = State<Scalar, Dim>;

  GridSeq<Scalar, Dim> states;
  Index n_steps = 0;
  int stage_order = 0;

  [[nodiscard]] double step() const noexcept { return states.step(); }
  [[nodiscard]] Index ghost_left() const noexcept { return -states.first(); }
  [[nodiscard]] Index ghost_right() const noexcept { return states.last() - n_steps; }
  [[nodiscard]] IndexRange range() const noexcept { return {states.first(), states.last()}; }
  [[nodiscard]] auto operator[](Index n) const { return states[n]; }
  [[nodiscard]] double time(Index n) const noexcept { return states.time(n); }

  /// Copy of the states on [0, n_steps] only.
  [[nodiscard]] Trajectory restricted() const {
    Trajectory out;
    out.states = GridSeq<Scalar, Dim>(step(), 0, states.values().middleCols(-states.first(), n_steps + 1));
    out.n_steps = n_steps;
    out.stage_order = stage_order;
    return out;
  }
};

/// Something that can hand out states of a stage by grid index.
template <typename Scalar, int Dim>
class StateSource {
 public:
  virtual ~StateSource() = default;
  /// Writes states first .. first+count-1 into the leading columns of out.
  virtual void fetch(Index first, Index count, StateBlock<Scalar, Dim>& out) = 0;
  [[nodiscard]] virtual IndexRange range() const = 0;
};

/// StateSource view of a stored trajectory.
template <typename Scalar, int Dim>
class TrajectorySource final : public StateSource<Scalar, Dim> {
 public:
  explicit TrajectorySource(const Trajectory<Scalar, Dim>& t) : traj_(t) {}

  void fetch(Index first, Index count, StateBlock<Scalar, Dim>& out) override {
    traj_.states.require(first, first + count - 1);
    out.leftCols(count) = traj_.states.values().middleCols(first - traj_.states.first(), count);
  }
  [[nodiscard]] IndexRange range() const override { return traj_.range(); }

 private:
  const Trajectory<Scalar, Dim>& traj_;
};

}  // namespace dcode
