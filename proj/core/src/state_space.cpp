#include "sinv/state_space.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "sinv/errors.hpp"

namespace sinv {

StateSpace realize(const RationalFunction& tf) {
    if (!tf.proper())
        throw ImproperTransferFunction("cannot realize improper transfer function " + tf.str());
    // Split off the direct term so the state part is strictly proper.
    auto [q, r] = poly_divmod(tf.num(), tf.den());
    double d = q.is_zero() ? 0.0 : q.coeffs()[0];
    int n = tf.den().degree();
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.D = d;
    if (n == 0) return ss;
    for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
    for (int i = 0; i < n; ++i) ss.A(n - 1, i) = -tf.den()[static_cast<std::size_t>(i)];
    ss.B(n - 1) = 1.0;
    for (int i = 0; i < n; ++i) ss.C(i) = r[static_cast<std::size_t>(i)];
    return ss;
}

StateSpace discretize_zoh(const StateSpace& ss, double Ts) {
    if (ss.discrete()) throw Error("discretize_zoh expects a continuous system");
    if (Ts <= 0.0) throw Error("sample period must be positive");
    int n = ss.order();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = ss.A;
    aug.topRightCorner(n, 1) = ss.B;
    Eigen::MatrixXd e = (aug * Ts).exp();
    StateSpace out = ss;
    out.A = e.topLeftCorner(n, n);
    out.B = e.topRightCorner(n, 1);
    out.Ts = Ts;
    return out;
}

DiscreteSimulator::DiscreteSimulator(StateSpace ss) : ss_(std::move(ss)) {
    if (!ss_.discrete()) throw Error("DiscreteSimulator expects a discrete system");
    x_ = Eigen::VectorXd::Zero(ss_.order());
}

double DiscreteSimulator::step(double u) {
    double y = output(u);
    x_ = ss_.A * x_ + ss_.B * u;
    return y;
}

void DiscreteSimulator::reset() { x_.setZero(); }

}  // namespace sinv
