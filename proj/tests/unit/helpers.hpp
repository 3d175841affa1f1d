#pragma once

#include "airship/model.hpp"
#include "airship/sim.hpp"

#include <random>

namespace testing_support {

using namespace airship;

class Sampler {
public:
    explicit Sampler(unsigned seed = 12345) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

    template <int N>
    Eigen::Matrix<double, N, 1> vec(double lo = -1.0, double hi = 1.0) {
        Eigen::Matrix<double, N, 1> v;
        for (int i = 0; i < N; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Quat unit_quat() {
        std::normal_distribution<double> n(0.0, 1.0);
        Quat q(n(gen_), n(gen_), n(gen_), n(gen_));
        return q.normalized();
    }

    BodyState body_state(double scale = 1.0) { return {vec<3>(-scale, scale), vec<3>(-0.3 * scale, 0.3 * scale)}; }

    Pose pose(double spread = 20.0) { return {vec<3>(-spread, spread), unit_quat()}; }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Rodrigues formula, body -> inertial.
inline Mat3 rodrigues(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    Mat3 K;
    K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
    return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
}

/// RK4 over a signed interval h with the wrench and wind held.
inline StateBundle integrate(const StateBundle& s, const Wrench& f, const Vec3& v_w, double h, const AirshipParams& p) {
    using Vec13 = Eigen::Matrix<double, 13, 1>;
    auto deriv = [&](const Vec13& y) -> Vec13 {
        const BodyState x = BodyState::from_vector(y.head<6>());
        const Pose pose{y.segment<3>(6), y.tail<4>().normalized()};
        Vec13 d;
        d << dynamics(x, pose, f, p), pose_rate(x, pose, v_w);
        return d;
    };
    Vec13 y;
    y << s.x.vector(), s.pose.vector();
    y = rk4(deriv, y, h);
    return {BodyState::from_vector(y.head<6>()), Pose{y.segment<3>(6), y.tail<4>().normalized()}};
}

}  // namespace testing_support
