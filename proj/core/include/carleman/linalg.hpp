#ifndef CARLEMAN_LINALG_HPP
#define CARLEMAN_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

namespace carleman {

// Small dense types used throughout. Dimensions are runtime but capped so
// everything stays on the stack in the hot evaluation loops.
inline constexpr int kMaxDim = 8;

using Vec  = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat  = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVec = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using complexd = std::complex<double>;

} // namespace carleman

#endif
