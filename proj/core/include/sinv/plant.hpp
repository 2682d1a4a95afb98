#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sinv/rational_matrix.hpp"

#include <Eigen/Core>

namespace sinv {

/// Physical parameters of one bending finger. SI units throughout.
struct ActuatorParams {
    double E;       // Young's modulus (Pa)
    double w;       // width (m)
    double a;       // top-to-neutral height (m)
    double b;       // neutral-to-bottom height (m)
    double t;       // wall thickness (m)
    double L0;      // initial length (m)
    double n;       // material exponent; 1 for the linear pipeline
    double M_eq;    // equivalent mass term
    double C_n;     // damping constant
    double c_gain;  // pressure-to-force constant

    void validate() const;  // all strictly positive
};

struct PumpParams {
    double A_syr;          // syringe inner cross-section (m^2)
    double lead;           // screw lead (m/rev)
    double C_i;            // actuator pneumatic capacity
    double omega_max = 5;  // motor speed limit (rev/s)

    void validate() const;
};

/// Modified moment of inertia for large deflection:
/// I_n = (1/2)^n * 1/(2+n) * w * (a+b)^(2+n).
double moment_of_inertia(const ActuatorParams& p);

/// Spring constant K_n = ((n+1)/n)^n * E * I_n / L0^(n+1).
double spring_constant(const ActuatorParams& p);

/// Pressure rate inside the actuator for motor speed omega_m (rev/s):
/// pdot = A_syr * lead * omega_m / (2*pi*C_i). Enforces the speed limit.
double pump_pressure_rate(const PumpParams& p, double omega_m);

/// Coefficients of one pump+finger channel k_gain/(s^3 + c_ratio*s^2 + k_ratio*s).
struct ChannelCoeffs {
    double k_gain;
    double c_ratio;
    double k_ratio;

    RationalFunction tf() const;
};

/// Cascade of the pump integrator and the linearized (n = 1) finger model.
ChannelCoeffs channel_coeffs(const ActuatorParams& act, const PumpParams& pump,
                             double pressure);
RationalFunction channel_tf(const ActuatorParams& act, const PumpParams& pump,
                            double pressure);

struct NaturalFrequency {
    double omega_n;  // rad/s
    double zeta;
    bool in_design_range;  // omega_n in [2, 3] rad/s
};

NaturalFrequency natural_frequency(double c_ratio, double k_ratio);

struct PerturbationBounds {
    double delta_c = 0.0;  // relative bound on c_ratio
    double delta_k = 0.0;  // relative bound on k_ratio
};

/// The assembled SIMO gripper: per-finger channel coefficients plus the
/// fabrication-error bounds used for perturbation sampling.
struct GripperModel {
    std::vector<ChannelCoeffs> channels;
    PerturbationBounds bounds;

    int n_fingers() const { return static_cast<int>(channels.size()); }
    RationalMatrix stack() const;
};

RationalMatrix stack_simo(const std::vector<ChannelCoeffs>& channels);

/// Per-finger uniform scaling of (c_ratio, k_ratio) inside the declared
/// bounds; deterministic under a fixed seed. Draw order: finger 0 c, finger 0
/// k, finger 1 c, ...
GripperModel perturb_sample(const GripperModel& model, std::uint64_t seed);

/// Uniformly sampled step-response record.
struct StepTrace {
    std::vector<double> t;  // s, uniform, strictly increasing
    std::vector<double> y;  // rad
    double u_step = 1.0;    // applied input step

    void validate() const;
};

void write_step_trace(std::ostream& os, const StepTrace& trace);
StepTrace read_step_trace(std::istream& is);

struct IdentifiedParams {
    double c_ratio;
    double k_ratio;
    double fit_percent;  // 100*(1 - |y-yhat| / |y-mean(y)|)
};

/// Fit (c_ratio, k_ratio) of k_known/(s^3 + c s^2 + k s) to a measured step
/// trace: Nelder-Mead in (log c, log k) from a log-grid multistart, output
/// error cost on the full trace.
IdentifiedParams identify_second_order(const StepTrace& trace, double k_known);

/// Joint state-space realization of the stacked SIMO gripper. The pump
/// pressure is one shared integrator state feeding every finger's second-order
/// block (2n+1 states total). Duplicating the integrator per finger would put
/// the same pole at the origin in two input-connected blocks and lose
/// controllability; sharing it keeps the realization minimal whenever the
/// finger dynamics are pairwise distinct.
struct StackedRealization {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
};

StackedRealization stacked_realization(const GripperModel& model);

struct MinimalityReport {
    bool controllable;
    bool observable;
};

/// Rank checks of [B AB A^2B ...] and [C; CA; ...] via singular values with
/// tolerance maxdim * sigma_max * 1e-12.
MinimalityReport check_minimal(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& C);

}  // namespace sinv
