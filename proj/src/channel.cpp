#include "nfisac/channel.hpp"

#include <cmath>
#include <numbers>

namespace nfisac {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
}  // namespace

double user_path_loss(double wavelength, double d_tk) {
    if (!(d_tk > 0.0)) {
        throw InvalidSpecError("user distance must be positive");
    }
    const double denom = kFourPi * d_tk;
    return wavelength * wavelength / (denom * denom);
}

double sensing_path_loss(double wavelength, double range_tx, double range_rx) {
    if (!(range_tx > 0.0) || !(range_rx > 0.0)) {
        throw InvalidSpecError("sensing ranges must be positive");
    }
    return wavelength * wavelength /
           (kFourPi * kFourPi * kFourPi * range_tx * range_tx * range_rx * range_rx);
}

UserChannel build_user_channel(const std::vector<Point3>& tx, const std::vector<Point3>& q,
                               double wavelength, double amplitude) {
    if (tx.empty() || q.empty()) {
        throw InvalidSpecError("channel endpoints must be nonempty");
    }
    if (!(wavelength > 0.0)) {
        throw InvalidSpecError("wavelength must be positive");
    }
    UserChannel ch;
    ch.amplitude = amplitude;
    ch.matrix.resize(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(tx.size()));
    for (std::size_t b = 0; b < q.size(); ++b) {
        for (std::size_t m = 0; m < tx.size(); ++m) {
            const double phase = kTwoPi / wavelength * distance(tx[m], q[b]);
            ch.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(m)) =
                amplitude * std::polar(1.0, phase);
        }
    }
    return ch;
}

SensingChannel build_sensing_channel(const std::vector<Point3>& tx, const std::vector<Point3>& rx,
                                     const Point3& target, double wavelength, double amplitude) {
    if (tx.empty() || rx.empty()) {
        throw InvalidSpecError("channel endpoints must be nonempty");
    }
    if (!(wavelength > 0.0)) {
        throw InvalidSpecError("wavelength must be positive");
    }
    SensingChannel ch;
    ch.amplitude = amplitude;
    ch.tx_response.resize(static_cast<Eigen::Index>(tx.size()));
    ch.rx_response.resize(static_cast<Eigen::Index>(rx.size()));
    for (std::size_t m = 0; m < tx.size(); ++m) {
        ch.tx_response(static_cast<Eigen::Index>(m)) =
            std::polar(1.0, kTwoPi / wavelength * distance(tx[m], target));
    }
    for (std::size_t n = 0; n < rx.size(); ++n) {
        ch.rx_response(static_cast<Eigen::Index>(n)) =
            std::polar(1.0, kTwoPi / wavelength * distance(rx[n], target));
    }
    ch.matrix = amplitude * ch.rx_response * ch.tx_response.adjoint();
    return ch;
}

}  // namespace nfisac
