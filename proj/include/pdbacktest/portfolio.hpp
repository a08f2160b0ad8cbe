#pragma once

#include <random>
#include <span>
#include <vector>

#include "pdbacktest/report.hpp"

namespace pdbt {

// True per-class PDs and the distribution of borrowers over the (true)
// rating classes. Probabilities are normalized to sum to one at
// construction.
struct PortfolioSpec {
    std::vector<double> true_pds;     // strictly increasing, in (0,1)
    std::vector<double> class_probs;  // positive, sum 1 after normalization

    int size() const { return static_cast<int>(true_pds.size()); }

    static PortfolioSpec make(std::vector<double> pds, std::vector<double> probs);
    // The 14-class prototype used throughout the simulation studies.
    static const PortfolioSpec& prototype();
};

// Counts of borrowers from true class i assigned to class j. Column sums
// define the tested samples.
struct MisclassificationMatrix {
    int k = 0;
    std::vector<long> cells;  // row-major K x K

    long at(int i, int j) const { return cells[static_cast<std::size_t>(i) * k + j]; }
    long& at(int i, int j) { return cells[static_cast<std::size_t>(i) * k + j]; }
    std::vector<long> row_sums() const;
    std::vector<long> col_sums() const;
    long total() const;
};

// Deterministic largest-remainder allocation of n_pf borrowers to classes,
// applied in increments of 100 so that counts never decrease along the
// ladder n_pf = 100, 200, ...
std::vector<long> build_portfolio(const PortfolioSpec& spec, int n_pf);

// Systematic monotone rating error: every borrower of true grade g is
// assigned to clamp(g - s, 1, K). s = 0 is the ideal classification.
MisclassificationMatrix upgrade_downgrade_matrix(std::span<const long> counts, int s);

// Gaussian-kernel dispersion of each true class over neighboring grades with
// bandwidth h; entries are n_i * w_ij(h) rounded half away from zero, so row
// sums may deviate from n_i by rounding. h = 0 is the identity assignment.
MisclassificationMatrix dispersion_matrix(std::span<const long> counts, double h);

// Per assigned class: exposures from the column sums, forecast pd from the
// class's own true PD. Classes with an empty column are omitted; defaults
// are left at zero. Class ids are 1-based.
ValidationSample assigned_sample(const MisclassificationMatrix& matrix,
                                 const PortfolioSpec& spec);

// Draw observed defaults per assigned class from the convolution of
// binomials induced by the matrix: o_j = sum_i Bin(n_ij, p_i). Cells are
// independent. The sampler caches the per-cell outcome tables, so repeated
// draws are cheap.
class ConvolutionSampler {
  public:
    ConvolutionSampler(const MisclassificationMatrix& matrix, const PortfolioSpec& spec);

    // Defaults for all K assigned classes (empty columns stay 0).
    std::vector<long> operator()(std::mt19937_64& gen) const;
    int k() const { return k_; }

  private:
    struct Cell {
        int col;
        BinomialSampler sampler;
    };
    int k_ = 0;
    std::vector<Cell> cells_;
};

std::vector<long> sample_defaults(const MisclassificationMatrix& matrix,
                                  const PortfolioSpec& spec, std::mt19937_64& gen);

}  // namespace pdbt
