#pragma once

// OpenMP kernels behind fitting, scoring and simulation. Every kernel is
// schedule independent: floating-point reductions run in a fixed order, so
// results are bit-identical for any thread count. The serial counterparts
// used to check them live in reference.hpp.

#include <span>
#include <vector>

#include "nbcf/corpus.hpp"
#include "nbcf/matrix.hpp"

namespace nbcf::kernels {

/// k x v matrix of per-class word totals sum_{d in C_i} x_j.
/// Unlabeled documents are ignored. Parallel over classes.
Matrix class_word_sums(const Corpus& corpus);

/// Closed-form multinomial estimator:
///   theta_ij = (alpha + N_ij) / (v alpha + sum_j N_ij)
Matrix estimate_nb(const Matrix& class_sums, double alpha);

/// Correlation-factor estimator. With P_j = sum_l N_lj the pooled totals,
///   theta_ij = (alpha + N_ij + t P_j) / (v alpha + sum_j (N_ij + t P_j))
/// which equals the sum over all documents of (y_i(d) + t) x_j. At t = 0
/// the result is bit-identical to estimate_nb.
Matrix estimate_nbcf(const Matrix& class_sums, double t, double alpha);

/// Elementwise log of theta (log 0 = -inf).
Matrix log_theta(const Matrix& theta);

/// Predicted class for each document, scored against precomputed
/// log theta. Parallel over documents.
std::vector<ClassId> predict_all(const Matrix& log_theta, std::span<const double> log_priors,
                                 std::span<const Document> docs);

}  // namespace nbcf::kernels
