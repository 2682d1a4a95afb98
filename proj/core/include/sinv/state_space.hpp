#pragma once

#include <Eigen/Core>

#include "sinv/rational.hpp"

namespace sinv {

/// SISO state space. Continuous when Ts == 0, discrete otherwise.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;
    double Ts = 0.0;

    bool discrete() const { return Ts > 0.0; }
    int order() const { return static_cast<int>(A.rows()); }
};

/// Controllable-canonical realization of a proper transfer function; state
/// dimension = deg(den), D nonzero iff biproper.
StateSpace realize(const RationalFunction& tf);

/// ZOH: A_d = exp(A*Ts), B_d = int_0^Ts exp(A tau) dtau * B, via the
/// augmented-matrix exponential. C, D unchanged.
StateSpace discretize_zoh(const StateSpace& ss, double Ts);

/// Steps a discrete system sample by sample. Output is read before the state
/// update, so y[k] depends on x[k] (and on u[k] only through D).
class DiscreteSimulator {
public:
    explicit DiscreteSimulator(StateSpace ss);

    double output(double u) const { return (ss_.C * x_)(0) + ss_.D * u; }
    /// Returns output(u), then advances the state with input u.
    double step(double u);
    void reset();

private:
    StateSpace ss_;
    Eigen::VectorXd x_;
};

}  // namespace sinv
