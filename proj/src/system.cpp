#include "skm/system.hpp"

#include <sstream>

#include "skm/error.hpp"

namespace skm {

LinearSystem::LinearSystem(DenseMatrix a, Vector b, std::optional<Vector> x_star)
    : a_(std::move(a)), b_(std::move(b)), x_star_(std::move(x_star)) {
  require(a_.rows() >= a_.cols(),
          "linear system must be overdetermined (rows >= cols)");
  require(b_.size() == a_.rows(),
          "right-hand side length does not match matrix rows");
  check_finite(b_, "right-hand side");
  if (x_star_) {
    require(x_star_->size() == a_.cols(),
            "planted solution length does not match matrix columns");
    check_finite(*x_star_, "planted solution");
    const double gap = norm(residual(a_, *x_star_, b_));
    const double bound = 1e-10 * (1.0 + norm(b_));
    if (gap > bound) {
      std::ostringstream msg;
      msg << "planted solution is inconsistent: ||A x* - b|| = " << gap
          << " exceeds " << bound;
      fail(ErrorKind::InvalidArgument, msg.str());
    }
  }
}

}  // namespace skm
