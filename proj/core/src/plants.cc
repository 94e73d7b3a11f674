#include "optcon/plants.h"

#include <cmath>
#include <sstream>

#include "optcon/error.h"
#include "optcon/random.h"

namespace optcon {

namespace {

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw Error(ErrorKind::kInvalidParameter, msg.str());
  }
}

void RequireWidth(const Eigen::VectorXd& w, int width, const char* type) {
  if (w.size() != width) {
    std::ostringstream msg;
    msg << type << " expects " << width << " uncertain parameters, got "
        << w.size();
    throw Error(ErrorKind::kShape, msg.str());
  }
}

}  // namespace

PlantDerivative PlantField(const Plant& p, const AgentState& s, double u,
                           const Eigen::VectorXd& w) {
  if (s.z.size() != p.m || s.x.size() != p.n || w.size() != p.w_dim) {
    std::ostringstream msg;
    msg << p.type << " plant expects (m, n, w) = (" << p.m << ", " << p.n
        << ", " << p.w_dim << "), got (" << s.z.size() << ", " << s.x.size()
        << ", " << w.size() << ")";
    throw Error(ErrorKind::kShape, msg.str());
  }
  PlantDerivative d;
  d.z_dot = p.m > 0 ? p.h(s.z, s.x(0), w) : Eigen::VectorXd();
  d.x_dot.resize(p.n);
  for (int k = 0; k + 1 < p.n; ++k) d.x_dot(k) = s.x(k + 1);
  d.x_dot(p.n - 1) = p.g(s.z, s.x, w) + p.b(w) * u;
  return d;
}

double SteadyStateInput(const Plant& p, double s, const Eigen::VectorXd& w) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.n);
  x(0) = s;
  const Eigen::VectorXd z = p.m > 0 ? p.z_star(s, w) : Eigen::VectorXd();
  return -p.g(z, x, w) / p.b(w);
}

Plant MakeManipulator(const ManipulatorParams& params) {
  RequirePositive(params.j1, "J1");
  RequirePositive(params.j2, "J2");
  RequirePositive(params.m0, "M0");
  RequirePositive(params.l0, "L0");
  RequirePositive(params.k, "k");
  RequirePositive(params.grav, "grav");

  Plant p;
  p.type = "manipulator";
  p.n = 4;
  p.m = 0;
  p.w_dim = 2;
  p.b0 = params.k / (params.j1 * params.j2);
  p.h = [](const Eigen::VectorXd&, double, const Eigen::VectorXd&) {
    return Eigen::VectorXd();
  };
  p.g = [params](const Eigen::VectorXd&, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& w) {
    RequireWidth(w, 2, "manipulator");
    const double mgl = (1.0 + w(0)) * params.m0 * params.grav *
                       (1.0 + w(1)) * params.l0 / params.j1;
    return -x(2) * (mgl * std::cos(x(0)) + params.k / params.j1 +
                    params.k / params.j2) +
           mgl * (x(1) * x(1) - params.k / params.j2) * std::sin(x(0));
  };
  const double gain = p.b0;
  p.b = [gain](const Eigen::VectorXd&) { return gain; };
  p.z_star = [](double, const Eigen::VectorXd&) { return Eigen::VectorXd(); };
  return p;
}

Eigen::VectorXd ManipulatorChainState(const ManipulatorParams& params,
                                      const Eigen::VectorXd& w, double q1,
                                      double dq1, double q2, double dq2) {
  RequireWidth(w, 2, "manipulator");
  const double mgl =
      (1.0 + w(0)) * params.m0 * params.grav * (1.0 + w(1)) * params.l0;
  Eigen::VectorXd x(4);
  x(0) = q1;
  x(1) = dq1;
  x(2) = -(mgl * std::sin(q1) + params.k * (q1 - q2)) / params.j1;
  x(3) = -(mgl * std::cos(q1) * dq1 + params.k * (dq1 - dq2)) / params.j1;
  return x;
}

Plant MakeFitzHughNagumo(double a, double b, double c, double b0) {
  RequirePositive(a, "a");
  RequirePositive(b, "b");
  RequirePositive(c, "c");
  RequirePositive(b0, "b0");

  Plant p;
  p.type = "fhn";
  p.n = 1;
  p.m = 1;
  p.w_dim = 4;
  p.b0 = b0;
  p.h = [b, c](const Eigen::VectorXd& z, double y, const Eigen::VectorXd& w) {
    RequireWidth(w, 4, "fhn");
    Eigen::VectorXd dz(1);
    dz(0) = -(1.0 + w(0)) * c * z(0) + (1.0 - w(1)) * b * y;
    return dz;
  };
  p.g = [a](const Eigen::VectorXd& z, const Eigen::VectorXd& x,
            const Eigen::VectorXd& w) {
    RequireWidth(w, 4, "fhn");
    const double v = x(0);
    return (1.0 + w(3)) * v * (a - v) * (v - 1.0) - z(0);
  };
  p.b = [](const Eigen::VectorXd& w) { return 1.0 + w(2); };
  p.z_star = [b, c](double s, const Eigen::VectorXd& w) {
    Eigen::VectorXd z(1);
    z(0) = (1.0 - w(1)) * b / ((1.0 + w(0)) * c) * s;
    return z;
  };
  return p;
}

Plant MakeVanDerPol(double b0) {
  RequirePositive(b0, "b0");
  Plant p;
  p.type = "vdp";
  p.n = 2;
  p.m = 0;
  p.w_dim = 3;
  p.b0 = b0;
  p.h = [](const Eigen::VectorXd&, double, const Eigen::VectorXd&) {
    return Eigen::VectorXd();
  };
  p.g = [](const Eigen::VectorXd&, const Eigen::VectorXd& x,
           const Eigen::VectorXd& w) {
    RequireWidth(w, 3, "vdp");
    return -(1.0 + w(0)) * x(0) + (1.0 + w(1)) * (1.0 - x(0) * x(0)) * x(1);
  };
  p.b = [](const Eigen::VectorXd& w) { return 1.0 + w(2); };
  p.z_star = [](double, const Eigen::VectorXd&) { return Eigen::VectorXd(); };
  return p;
}

Plant MakeIntegratorChain(int n) {
  if (n < 1) {
    throw Error(ErrorKind::kInvalidParameter, "integrator chain needs n >= 1");
  }
  Plant p;
  p.type = "integrator";
  p.n = n;
  p.m = 0;
  p.w_dim = 0;
  p.b0 = 1.0;
  p.h = [](const Eigen::VectorXd&, double, const Eigen::VectorXd&) {
    return Eigen::VectorXd();
  };
  p.g = [](const Eigen::VectorXd&, const Eigen::VectorXd&,
           const Eigen::VectorXd&) { return 0.0; };
  p.b = [](const Eigen::VectorXd&) { return 1.0; };
  p.z_star = [](double, const Eigen::VectorXd&) { return Eigen::VectorXd(); };
  return p;
}

void UncertaintySpec::Validate() const {
  if (lower.size() != upper.size()) {
    throw Error(ErrorKind::kShape, "uncertainty bounds differ in length");
  }
  if (!nonnegative.empty() &&
      static_cast<int>(nonnegative.size()) != lower.size()) {
    throw Error(ErrorKind::kShape,
                "nonnegative flags differ in length from the bounds");
  }
  for (int k = 0; k < lower.size(); ++k) {
    if (!(lower(k) <= upper(k))) {
      throw Error(ErrorKind::kInvalidRange,
                  "uncertainty box has lower > upper at component " +
                      std::to_string(k));
    }
    if (lower(k) > 0.0 || upper(k) < 0.0) {
      throw Error(ErrorKind::kInvalidRange,
                  "uncertainty box must contain the origin (component " +
                      std::to_string(k) + ")");
    }
  }
}

Eigen::VectorXd SampleUncertainty(const UncertaintySpec& spec,
                                  std::uint64_t seed) {
  spec.Validate();
  Rng rng(seed);
  Eigen::VectorXd w(spec.dim());
  for (int k = 0; k < spec.dim(); ++k) {
    double lo = spec.lower(k);
    if (!spec.nonnegative.empty() && spec.nonnegative[k]) lo = 0.0;
    w(k) = rng.Uniform(lo, spec.upper(k));
  }
  return w;
}

}  // namespace optcon
