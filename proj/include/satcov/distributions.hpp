#pragma once

#include "satcov/geometry.hpp"

namespace satcov {

/// Poisson masses of the three visible-count events driving the coverage
/// decomposition. Fields sum to 1.
struct CountProbabilities {
  double p_zero;
  double p_one_to_km1;
  double p_geq_k;
};

CountProbabilities count_probabilities(const RingGeometry& ring, int k);

/// Nearest-satellite distance density conditioned on 1 <= count <= K-1.
/// Zero outside [r_min, r_max]. Requires K >= 2.
double nearest_pdf_given_few(const RingGeometry& ring, int k, double r1_km);

/// Nearest-satellite distance density conditioned on count >= 1; the
/// K = 1, delta = 1 reduction of the Kth-nearest machinery.
double nearest_pdf_given_some(const RingGeometry& ring, double r1_km);

/// Joint probability P[count >= K, Kth distance >= r_min/delta]; the
/// normalizer of the Kth-nearest conditional density.
double kth_normalizer(const RingGeometry& ring, int k, double delta);

/// Kth-nearest distance density conditioned on count >= K and the relative
/// distance delta. Support [r_min/delta, r_max]. Requires K >= 2.
double kth_pdf_given_many(const RingGeometry& ring, int k, double delta,
                          double rk_km);

/// Matching CCDF: 1 at r_min/delta, 0 at r_max.
double kth_ccdf_given_many(const RingGeometry& ring, int k, double delta,
                           double rk_km);

/// Density of the relative distance delta = d1/dK given count >= K.
/// Support [r_min/r_max, 1]. Requires K >= 2.
double delta_pdf(const RingGeometry& ring, int k, double x);

/// Joint density of (d1, dK) given count >= K; zero unless
/// r_min <= r1 <= rK <= r_max. Requires K >= 2.
double joint_pdf_d1_dk(const RingGeometry& ring, int k, double r1_km,
                       double rk_km);

}  // namespace satcov
