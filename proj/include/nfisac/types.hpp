#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfisac {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

/// Cartesian point, all coordinates in meters.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally invalid input (bad dimensions, nonpositive lengths, ...).
struct InvalidSpecError : Error {
    using Error::Error;
};

/// No spacing-feasible placement found within the sampling budget.
struct PackingInfeasibleError : Error {
    using Error::Error;
};

/// Non-finite values or a factorization that should not have failed.
struct NumericError : Error {
    using Error::Error;
};

/// A convex subproblem has an empty feasible set for the current iterate.
struct InfeasibleSubproblemError : Error {
    explicit InfeasibleSubproblemError(const std::string& what, double slack_)
        : Error(what), slack(slack_) {}
    double slack = 0.0;
};

/// The configuration cannot satisfy the sensing constraint at initialization.
struct InfeasibleConfigError : Error {
    explicit InfeasibleConfigError(const std::string& what, double max_sinr_)
        : Error(what), max_sinr(max_sinr_) {}
    double max_sinr = 0.0;
};

struct ConfigParseError : Error {
    ConfigParseError(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
    int line = 0;
};

}  // namespace nfisac
