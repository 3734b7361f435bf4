#include "obswave/quadform.hpp"

#include <cmath>
#include <limits>

namespace obswave {

std::complex<double> ft(double x, double T) {
  double u = T * x;
  if (std::abs(u) < 1e-6) {
    // (e^{iu} - 1)/(iu) = 1 + iu/2 - u^2/6 + O(u^3)
    return {1.0 - u * u / 6.0, u / 2.0};
  }
  // (e^{iu}-1)/(iu) = sin(u)/u + i (1-cos(u))/u
  return {std::sin(u) / u, (1.0 - std::cos(u)) / u};
}

Eigen::MatrixXcd assembleForm(const SpectralBasis& basis, const MassMatrix& mass, double T) {
  if (T <= 0) throw QuadFormError("time horizon must be positive");
  int m = mass.last - mass.first;
  Eigen::MatrixXcd H(2 * m, 2 * m);
  for (int l = 0; l < m; ++l) {
    double lamL = basis.modes()[mass.first + l].lambda;
    for (int j = 0; j < m; ++j) {
      double lamJ = basis.modes()[mass.first + j].lambda;
      double M = mass.m(j, l);
      std::complex<double> a = ft(lamJ - lamL, T) * M;  // p_j pbar_l
      std::complex<double> b = ft(lamJ + lamL, T) * M;  // p_j qbar_l
      H(l, j) = a;
      H(m + l, m + j) = std::conj(a);
      H(m + l, j) = b;
      H(j, m + l) = std::conj(b);
    }
  }
  return H;
}

MinEig minEigHermitian(const Eigen::MatrixXcd& H) {
  double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw QuadFormError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw QuadFormError("Hermitian eigensolver failed to converge");
  MinEig out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  double resid = (H * out.vector - out.value * out.vector).norm();
  if (resid > 1e-10 * scale * std::sqrt((double)H.rows()))
    throw QuadFormError("eigenpair residual check failed");
  return out;
}

BandConstant bandConstant(const SpectralBasis& basis, const MassMatrix& mass, double T) {
  auto me = minEigHermitian(assembleForm(basis, mass, T));
  BandConstant out;
  out.value = 0.5 * T * me.value;
  out.perTime = out.value / T;
  out.minimizer = std::move(me.vector);
  return out;
}

double g1(const SpectralBasis& basis, const MassMatrix& mass) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& space : basis.eigenspaces()) {
    if (space.first < mass.first || space.last > mass.last) continue;
    any = true;
    Eigen::MatrixXd block = eigenspaceBlock(mass, space);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
    best = std::min(best, es.eigenvalues()(0));
  }
  if (!any) throw QuadFormError("mass matrix covers no complete eigenspace");
  return best;
}

std::vector<int> defaultBandGrid(const SpectralBasis& basis) {
  std::vector<int> grid;
  int n = basis.size();
  for (int q = 1; q <= 4; ++q) {
    int aligned = basis.alignDown(q * n / 4);
    if (aligned > 0 && (grid.empty() || aligned != grid.back())) grid.push_back(aligned);
  }
  return grid;
}

}  // namespace obswave
