#include "geoplan/manifold.hpp"

#include <cmath>
#include <sstream>

namespace geoplan {

namespace {
constexpr double kAntipodalTol = 1e-12;
}

Factor Factor::circle(double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference)) {
    fail(ErrorCode::BadInput, "circle circumference must be positive");
  }
  Factor f;
  f.kind_ = FactorKind::Circle;
  f.circumference_ = circumference;
  return f;
}

Factor Factor::line(double lo, double hi) {
  if (!(lo < hi)) {
    fail(ErrorCode::BadInput, "line bounds must satisfy lo < hi");
  }
  Factor f;
  f.kind_ = FactorKind::Line;
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

Factor Factor::line() { return Factor{}; }

bool Factor::bounded() const {
  if (kind_ == FactorKind::Circle) return true;
  return std::isfinite(lo_) && std::isfinite(hi_);
}

double Factor::convexity_radius() const {
  if (kind_ == FactorKind::Circle) return circumference_ / 4.0;
  return std::numeric_limits<double>::infinity();
}

FlatManifold::FlatManifold(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    fail(ErrorCode::BadInput, "manifold needs at least one factor");
  }
}

std::vector<int> FlatManifold::circle_dims() const {
  std::vector<int> dims;
  for (int i = 0; i < dim(); ++i) {
    if (factors_[i].is_circle()) dims.push_back(i);
  }
  return dims;
}

bool FlatManifold::has_circles() const {
  for (const Factor& f : factors_) {
    if (f.is_circle()) return true;
  }
  return false;
}

void FlatManifold::check_dim(const Eigen::VectorXd& v, const char* what) const {
  if (v.size() != dim()) {
    std::ostringstream os;
    os << what << " has dimension " << v.size() << ", manifold has " << dim();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

MPoint FlatManifold::canonicalize(const Eigen::VectorXd& raw) const {
  check_dim(raw, "point");
  Eigen::VectorXd out = raw;
  for (int i = 0; i < dim(); ++i) {
    const Factor& f = factors_[i];
    if (f.is_circle()) {
      const double c = f.circumference();
      double x = std::fmod(raw[i], c);
      if (x < 0.0) x += c;
      if (x >= c) x = 0.0;  // fmod rounding at the seam
      out[i] = x;
    } else {
      if (raw[i] < f.lo() - 1e-12 || raw[i] > f.hi() + 1e-12) {
        std::ostringstream os;
        os << "coordinate " << i << " = " << raw[i] << " outside ["
           << f.lo() << ", " << f.hi() << "]";
        fail(ErrorCode::LineOutOfBounds, os.str());
      }
      out[i] = std::min(std::max(raw[i], f.lo()), f.hi());
    }
  }
  return MPoint{std::move(out)};
}

Eigen::VectorXd FlatManifold::minimizing_delta(const MPoint& p,
                                               const MPoint& q,
                                               bool strict) const {
  check_dim(p.coords, "p");
  check_dim(q.coords, "q");
  Eigen::VectorXd delta = q.coords - p.coords;
  for (int i = 0; i < dim(); ++i) {
    const Factor& f = factors_[i];
    if (!f.is_circle()) continue;
    const double c = f.circumference();
    double d = std::fmod(delta[i], c);
    if (d > c / 2.0) d -= c;
    if (d <= -c / 2.0) d += c;
    if (strict && std::abs(std::abs(d) - c / 2.0) <= kAntipodalTol) {
      std::ostringstream os;
      os << "coordinates are an exact wrap tie on dimension " << i;
      fail(ErrorCode::AntipodalAmbiguity, os.str());
    }
    delta[i] = d;
  }
  return delta;
}

double FlatManifold::geodesic_distance(const MPoint& p, const MPoint& q) const {
  return minimizing_delta(p, q, /*strict=*/false).norm();
}

MPoint FlatManifold::geodesic_interpolate(const MPoint& p, const MPoint& q,
                                          double t) const {
  const Eigen::VectorXd delta = minimizing_delta(p, q, /*strict=*/true);
  return canonicalize(p.coords + t * delta);
}

Eigen::VectorXd FlatManifold::lift(const MPoint& p, const Offset& k) const {
  check_dim(p.coords, "point");
  if (k.k.size() != dim()) {
    fail(ErrorCode::DimensionMismatch, "offset dimension mismatch");
  }
  Eigen::VectorXd out = p.coords;
  for (int i = 0; i < dim(); ++i) {
    if (factors_[i].is_circle()) {
      out[i] += static_cast<double>(k.k[i]) * factors_[i].circumference();
    }
  }
  return out;
}

Offset FlatManifold::nearest_offset(const Eigen::VectorXd& from,
                                    const MPoint& q) const {
  check_dim(from, "from");
  Offset off = Offset::zero(dim());
  for (int i = 0; i < dim(); ++i) {
    if (factors_[i].is_circle()) {
      const double c = factors_[i].circumference();
      off.k[i] = static_cast<int>(std::lround((from[i] - q.coords[i]) / c));
    }
  }
  return off;
}

FlatManifold FlatManifold::unroll_factor(int i, double cut) const {
  if (i < 0 || i >= dim()) {
    fail(ErrorCode::DimensionMismatch, "factor index out of range");
  }
  if (!factors_[i].is_circle()) {
    std::ostringstream os;
    os << "factor " << i << " is not a circle";
    fail(ErrorCode::NotACircle, os.str());
  }
  std::vector<Factor> fs = factors_;
  fs[i] = Factor::line(cut, cut + factors_[i].circumference());
  return FlatManifold(std::move(fs));
}

}  // namespace geoplan
