#pragma once

#include <optional>

#include "pptgeo/complex_matrix.hpp"
#include "pptgeo/spectral.hpp"

namespace pptgeo {

// Square matrix certified Hermitian (entrywise defect <= tol at construction).
class HermitianOperator {
  public:
    HermitianOperator() = default;
    explicit HermitianOperator(ComplexMatrix m, double tol = 1e-12);

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

  private:
    ComplexMatrix m_;
};

// Density matrix with an ordered factor structure and the bipartite cut
// (factor indices transposed by the PPT map). Construction checks shape,
// Hermiticity, finiteness and unit trace; the PSD invariant is checked by
// validate() since it needs a full eigendecomposition.
class FactoredState {
  public:
    FactoredState() = default;
    FactoredState(ComplexMatrix m, std::vector<std::size_t> factor_dims,
                  std::vector<std::size_t> transpose_set);

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    const std::vector<std::size_t>& factor_dims() const { return dims_; }
    const std::vector<std::size_t>& transpose_set() const { return tset_; }

    // min eigenvalue; throws std::domain_error below -tol_eig
    double validate(double tol_eig = 1e-10) const;

  private:
    ComplexMatrix m_;
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> tset_;
};

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& subset);
FactoredState partial_transpose(const FactoredState& s, const std::vector<std::size_t>& subset);

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& traced);
ComplexMatrix partial_trace(const FactoredState& s, const std::vector<std::size_t>& traced);

// Reorders tensor factors: output factor k is input factor perm[k].
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm);

// Applies u on one factor: (I x u x I) m (I x u x I)^dag.
ComplexMatrix apply_local_unitary(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                  std::size_t factor, const ComplexMatrix& u);

// Realignment on C^d (x) C^d: R(a)[(i,j),(k,l)] = a[(i,k),(j,l)].
ComplexMatrix realign(const ComplexMatrix& a);

// p-Schatten norm of the singular-value vector; p in [1, inf] (use
// std::numeric_limits<double>::infinity() for the operator norm).
double schatten_norm(const ComplexMatrix& a, double p);

double trace_distance(const FactoredState& rho, const FactoredState& sigma);

// Uhlmann fidelity Tr sqrt(sqrt(sigma) rho sqrt(sigma)). Negative eigenvalues
// of the inner operator below -1e-10 raise std::domain_error; milder drift is
// clipped to zero.
double fidelity(const FactoredState& rho, const FactoredState& sigma);

double min_eigenvalue(const HermitianOperator& a);

struct PptReport {
    bool ppt = false;
    double witness_eigenvalue = 0.0;  // min eigenvalue of the partial transpose
};
PptReport is_ppt(const FactoredState& s, double tol = 1e-10);

}  // namespace pptgeo
