#ifndef WTAIL_KERNEL_HPP
#define WTAIL_KERNEL_HPP

#include <string>
#include <vector>

#include "wtail/sample.hpp"

namespace wtail {

enum class KernelId {
    /// K(u) = (1.9 - 1.8 u) on [-1, 1], zero outside. Not symmetric: points
    /// with X above x (u < 0) receive more weight than their mirror images.
    asymmetric_linear,
    /// K(u) = (15/16) (1 - u^2)^2 on [-1, 1], zero outside.
    biquadratic,
};

struct KernelSpec {
    KernelId id = KernelId::asymmetric_linear;

    static KernelSpec from_name(const std::string& name);
    const char* name() const noexcept;
};

/// Evaluates the kernel at u. Exactly zero for |u| > 1; the support is the
/// closed interval [-1, 1].
double eval_kernel(KernelSpec kernel, double u);

/// Unnormalized kernel values K((x - X_i)/h), one per observation.
std::vector<double> kernel_values(double x, const CensoredSample& sample,
                                  Bandwidth h, KernelSpec kernel);

/// Nadaraya-Watson weights B_i(x) = K((x - X_i)/h) / sum_j K((x - X_j)/h).
/// The normalizer is accumulated with compensated summation so the weights
/// sum to 1 within 1e-12. Throws empty_neighborhood if every kernel value
/// is zero.
std::vector<double> nw_weights(double x, const CensoredSample& sample,
                               Bandwidth h, KernelSpec kernel);

}  // namespace wtail

#endif
