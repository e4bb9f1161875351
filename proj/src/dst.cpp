#include "hstumor/dst.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "hstumor/errors.hpp"

namespace hst {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

}  // namespace

struct DirichletSolver::Impl {
  Impl(const CartesianGrid& g, double k)
      : grid(g), kappa(k), nx(g.cells_x() - 1), ny(g.cells_y() - 1), buf(std::size_t(nx) * std::size_t(ny)) {
    const double h = g.hx();
    const double pi = std::numbers::pi;
    std::vector<double> ex(nx), ey(ny);
    for (int p = 0; p < nx; ++p) ex[p] = std::pow(std::sin(pi * (p + 1) / (2.0 * g.cells_x())), 2);
    for (int q = 0; q < ny; ++q) ey[q] = std::pow(std::sin(pi * (q + 1) / (2.0 * g.cells_y())), 2);
    // Inverse eigenvalues with the transform normalisation folded in.
    const double norm = 4.0 * double(nx + 1) * double(ny + 1);
    inv.resize(std::size_t(nx) * std::size_t(ny));
    for (int q = 0; q < ny; ++q)
      for (int p = 0; p < nx; ++p) {
        const double lam = -4.0 / (h * h) * (ex[p] + ey[q]) - kappa;
        inv[std::size_t(q) * nx + p] = 1.0 / (lam * norm);
      }
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_2d(ny, nx, buf.data, buf.data, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    if (!plan) throw SolverError("DirichletSolver: FFTW planning failed");
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  CartesianGrid grid;
  double kappa;
  int nx, ny;
  FftwBuffer buf;
  std::vector<double> inv;
  fftw_plan plan = nullptr;
};

DirichletSolver::DirichletSolver(const CartesianGrid& grid, double kappa) {
  if (!grid.is_square()) throw DomainError("DirichletSolver: grid spacing must be equal in x and y");
  if (!(kappa >= 0.0)) throw DomainError("DirichletSolver: kappa must be >= 0");
  impl_ = std::make_unique<Impl>(grid, kappa);
}

DirichletSolver::~DirichletSolver() = default;
DirichletSolver::DirichletSolver(DirichletSolver&&) noexcept = default;
DirichletSolver& DirichletSolver::operator=(DirichletSolver&&) noexcept = default;

double DirichletSolver::kappa() const { return impl_->kappa; }

void DirichletSolver::solve(std::span<double> values) const {
  const Impl& s = *impl_;
  if (values.size() != s.grid.node_count()) throw DomainError("DirichletSolver: field size mismatch");
  double* b = s.buf.data;
  for (int j = 1; j <= s.ny; ++j)
    for (int i = 1; i <= s.nx; ++i) b[std::size_t(j - 1) * s.nx + (i - 1)] = values[s.grid.index(i, j)];
  fftw_execute(s.plan);
  for (std::size_t k = 0; k < s.inv.size(); ++k) b[k] *= s.inv[k];
  fftw_execute(s.plan);
  for (int j = 0; j <= s.ny + 1; ++j)
    for (int i = 0; i <= s.nx + 1; ++i) {
      const bool edge = i == 0 || j == 0 || i == s.nx + 1 || j == s.ny + 1;
      values[s.grid.index(i, j)] = edge ? 0.0 : b[std::size_t(j - 1) * s.nx + (i - 1)];
    }
}

}  // namespace hst
