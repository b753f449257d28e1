#pragma once

#include <vector>

#include "fidgap/dynamics.hpp"
#include "fidgap/prep.hpp"

namespace fidgap {

// Evaluation grid. t_max <= 0 requests the default span 10 / rate once the
// decay rate is known. Log spacing resolves the transient and the floor;
// single-step maps always evaluate on integers.
struct TimeGrid {
    enum class Spacing { linear, log };

    double t_max = 0.0;
    int points = 200;
    Spacing spacing = Spacing::log;
};

std::vector<double> make_time_grid(const TimeGrid& grid, DynKind kind, double rate_hint);

// A fully assembled model: reference state, preparation, dynamics and the
// encoded pure state whose fidelity is tracked.
struct Model {
    ReferenceState ref;
    Preparation prep;
    DynamicsSpec dyn;
    CVector psi;
    TimeGrid grid;
};

}  // namespace fidgap
