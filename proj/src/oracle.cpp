// SPDX-License-Identifier: Apache-2.0

#include "subeigen/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include "subeigen/error.hpp"
#include "subeigen/operators.hpp"

namespace subeigen::oracle
{

double dense_min_eigenvalue(const Eigen::MatrixXd &stiffness, const Eigen::MatrixXd &mass)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass,
                                                                   Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::InternalConsistency, "dense eigen-decomposition failed");
  return solver.eigenvalues().minCoeff();
}

Eigen::MatrixXd assemble_stiffness(const GridPtr &grid)
{
  // Polarization of the p = 2 energy: <A e_i, e_j> = (E(e_i + e_j) - E(e_i - e_j)) / 4.
  const auto n = grid->num_nodes();
  Eigen::MatrixXd k(n, n);
  Field e = Field::zeros(grid);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    e.values[i] = 2.0;
    k(i, i) = p_energy(e, 2.0) / 4.0;
    e.values[i] = 1.0;
    for (Eigen::Index j = 0; j < i; ++j)
    {
      e.values[j] = 1.0;
      const double plus = p_energy(e, 2.0);
      e.values[j] = -1.0;
      const double minus = p_energy(e, 2.0);
      e.values[j] = 0.0;
      k(i, j) = k(j, i) = (plus - minus) / 4.0;
    }
    e.values[i] = 0.0;
  }
  return k / grid->cell_volume();
}

namespace
{

class CoordinateObjective
{
public:
  virtual ~CoordinateObjective() = default;
  // f with coordinate i replaced by v; x() is left unchanged.
  virtual double value_at(Eigen::Index i, double v) = 0;
  virtual double evaluate(const Eigen::VectorXd &x) const = 0;
  // Replaces the current point; returns f there.
  virtual double reset(const Eigen::VectorXd &x) = 0;
  virtual void set(Eigen::Index i, double v) = 0;
  const Eigen::VectorXd &x() const { return x_; }

protected:
  Eigen::VectorXd x_;
};

class FunctionObjective final : public CoordinateObjective
{
public:
  explicit FunctionObjective(std::function<double(const Eigen::VectorXd &)> f) : f_(std::move(f)) {}

  double value_at(Eigen::Index i, double v) override
  {
    const double old = x_[i];
    x_[i] = v;
    const double r = f_(x_);
    x_[i] = old;
    return r;
  }
  double evaluate(const Eigen::VectorXd &x) const override { return f_(x); }
  double reset(const Eigen::VectorXd &x) override
  {
    x_ = x;
    return f_(x_);
  }
  void set(Eigen::Index i, double v) override { x_[i] = v; }

private:
  std::function<double(const Eigen::VectorXd &)> f_;
};

// Rayleigh quotient with O(1) single-coordinate updates: only the cells
// touching a node and that node's |u|^q term change.
class RayleighObjective final : public CoordinateObjective
{
public:
  RayleighObjective(GridPtr grid, double p, double q) : grid_(std::move(grid)), p_(p), q_(q)
  {
    for (Eigen::Index i = 0; i < grid_->num_nodes(); ++i)
      touching_.push_back(grid_->cells_touching(i));
    cell_energy_.resize(grid_->num_cells());
  }

  double value_at(Eigen::Index i, double v) override
  {
    const double old = x_[i];
    x_[i] = v;
    double energy = energy_sum_;
    for (const auto c : touching_[static_cast<std::size_t>(i)])
      energy += cell(c) - cell_energy_[c];
    const double mass = mass_sum_ + power(v) - power(old);
    x_[i] = old;
    return quotient(energy, mass);
  }

  double evaluate(const Eigen::VectorXd &x) const override
  {
    Field u{grid_, x};
    return p_energy(u, p_) / std::pow(lq_norm(u, q_), p_);
  }

  double reset(const Eigen::VectorXd &x) override
  {
    x_ = x;
    energy_sum_ = 0.0;
    for (Eigen::Index c = 0; c < grid_->num_cells(); ++c)
    {
      cell_energy_[c] = cell(c);
      energy_sum_ += cell_energy_[c];
    }
    mass_sum_ = 0.0;
    for (Eigen::Index i = 0; i < x_.size(); ++i)
      mass_sum_ += power(x_[i]);
    return quotient(energy_sum_, mass_sum_);
  }

  void set(Eigen::Index i, double v) override
  {
    mass_sum_ += power(v) - power(x_[i]);
    x_[i] = v;
    for (const auto c : touching_[static_cast<std::size_t>(i)])
    {
      const double e = cell(c);
      energy_sum_ += e - cell_energy_[c];
      cell_energy_[c] = e;
    }
  }

private:
  double cell(Eigen::Index c) const
  {
    double g[8];
    const int n1 = grid_->horizontal_dim();
    grid_->cell_gradient(c, x_, std::span<double>(g, n1));
    double g2 = 0.0;
    for (int k = 0; k < n1; ++k)
      g2 += g[k] * g[k];
    return g2 > 0.0 ? std::pow(g2, 0.5 * p_) : 0.0;
  }
  double power(double v) const { return v == 0.0 ? 0.0 : std::pow(std::abs(v), q_); }
  double quotient(double energy, double mass) const
  {
    const double vol = grid_->cell_volume();
    if (!(mass > 0.0))
      return std::numeric_limits<double>::infinity();
    return energy * vol / std::pow(mass * vol, p_ / q_);
  }

  GridPtr grid_;
  double p_, q_;
  std::vector<std::vector<Eigen::Index>> touching_;
  Eigen::VectorXd cell_energy_;
  double energy_sum_ = 0.0;
  double mass_sum_ = 0.0;
};

struct LineMin
{
  double t;
  double value;
};

// Minimizes phi on a line through t = 0 (phi(0) = f0): expands a bracket with
// initial width delta, then refines with Brent's method.
template <typename Phi>
LineMin line_minimize(const Phi &phi, double f0, double delta)
{
  double a = 0.0, m = 0.0, fm = f0, b;
  const double fp = phi(delta);
  if (fp < f0)
  {
    m = delta;
    fm = fp;
    b = 2.0 * delta;
  }
  else
  {
    const double fn = phi(-delta);
    if (fn < f0)
    {
      m = -delta;
      fm = fn;
      b = -2.0 * delta;
    }
    else
    {
      a = -delta;
      b = delta;
    }
  }
  if (m != 0.0)
  {
    double fb = phi(b);
    for (int k = 0; k < 60 && fb < fm; ++k)
    {
      a = m;
      m = b;
      fm = fb;
      b = m + 2.0 * (m - a);
      fb = phi(b);
    }
  }
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::uintmax_t max_iter = 200;
  const auto [t, ft] = boost::math::tools::brent_find_minima(
      phi, lo, hi, std::numeric_limits<double>::digits / 2, max_iter);
  if (ft < fm)
    return {t, ft};
  return {m, fm};
}

Eigen::VectorXd coordinate_search(CoordinateObjective &obj, const Eigen::VectorXd &x0,
                                  const SearchOptions &opts)
{
  double fx = obj.reset(x0);
  const Eigen::Index n = x0.size();
  const double scale0 = x0.cwiseAbs().maxCoeff();
  const double width0 = scale0 > 0.0 ? scale0 : 1.0;
  Eigen::VectorXd step = Eigen::VectorXd::Constant(n, 0.1 * width0);
  int quiet = 0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep)
  {
    const Eigen::VectorXd start = obj.x();
    const double f_start = fx;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const double c = obj.x()[i];
      auto phi = [&](double t) { return obj.value_at(i, c + t); };
      const double floor = 1e-14 * std::max(obj.x().cwiseAbs().maxCoeff(), 1e-300);
      const LineMin lm = line_minimize(phi, fx, std::max(step[i], floor));
      if (lm.value < fx)
      {
        obj.set(i, c + lm.t);
        fx = lm.value;
        step[i] = 2.0 * std::abs(lm.t);
      }
      else
      {
        step[i] *= 0.5;
      }
    }
    const Eigen::VectorXd dir = obj.x() - start;
    if (dir.cwiseAbs().maxCoeff() > 0.0)
    {
      const Eigen::VectorXd base = obj.x();
      auto phi = [&](double t) { return obj.evaluate(base + t * dir); };
      const LineMin lm = line_minimize(phi, fx, 1.0);
      if (lm.value < fx)
        fx = obj.reset(base + lm.t * dir);
      else
        fx = obj.reset(base);
    }
    else
    {
      fx = obj.reset(obj.x());
    }
    if (f_start - fx <= opts.rel_tol * std::abs(fx))
    {
      if (++quiet >= 3)
        break;
    }
    else
    {
      quiet = 0;
    }
  }
  return obj.x();
}

Field normalized(Field u, double q)
{
  u *= 1.0 / lq_norm(u, q);
  if (u.values.sum() < 0.0)
    u *= -1.0;
  return u;
}

}  // namespace

Eigen::VectorXd minimize_coordinatewise(const std::function<double(const Eigen::VectorXd &)> &f,
                                        Eigen::VectorXd x0, const SearchOptions &opts)
{
  FunctionObjective obj(f);
  return coordinate_search(obj, x0, opts);
}

OracleResult brute_force_lambda(const GridPtr &grid, double p, double q, int restarts,
                                std::uint64_t seed, bool force_multistart)
{
  if (grid->num_nodes() > kNodeCap)
    throw Error(ErrorKind::NodeCapExceeded, "oracle grids are limited to 25 interior nodes");
  if (!(p > 1.0) || !(q > 1.0))
    throw Error(ErrorKind::OutOfRange, "oracle requires p > 1 and q > 1");

  OracleResult result;
  if (p == 2.0 && q == 2.0 && !force_multistart)
  {
    const Eigen::MatrixXd k = assemble_stiffness(grid);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::InternalConsistency, "dense eigen-decomposition failed");
    result.lambda_star = solver.eigenvalues()[0];
    result.minimizer = normalized(Field{grid, solver.eigenvectors().col(0)}, 2.0);
    result.method = OracleMethod::DenseEig;
    return result;
  }

  if (restarts < kMinRestarts)
    throw Error(ErrorKind::OutOfRange, "multistart oracle needs at least 32 restarts");

  const Eigen::Index n = grid->num_nodes();
  std::vector<Eigen::VectorXd> starts;
  for (int r = 0; r < restarts; ++r)
  {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
      x[i] = normal(rng);
    starts.push_back(normalized(Field{grid, x}, q).values);
  }

  auto run = [&](std::size_t r) {
    RayleighObjective obj(grid, p, q);
    Eigen::VectorXd x = coordinate_search(obj, starts[r], {});
    return std::pair{obj.reset(x), x};
  };

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<double, Eigen::VectorXd>> found(starts.size());
  for (std::size_t base = 0; base < starts.size(); base += workers)
  {
    std::vector<std::future<std::pair<double, Eigen::VectorXd>>> batch;
    for (std::size_t r = base; r < std::min(starts.size(), base + workers); ++r)
      batch.push_back(std::async(std::launch::async, run, r));
    for (std::size_t k = 0; k < batch.size(); ++k)
      found[base + k] = batch[k].get();
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < found.size(); ++r)
    if (found[r].first < found[best].first)
      best = r;

  RayleighObjective positive(grid, p, q);
  const double positive_value = positive.reset(Eigen::VectorXd::Ones(n));

  result.lambda_star = found[best].first;
  result.minimizer = normalized(Field{grid, found[best].second}, q);
  result.method = OracleMethod::Multistart;
  result.restarts_used = restarts;
  result.warning = !(found[best].first < positive_value);
  return result;
}

}  // namespace subeigen::oracle
