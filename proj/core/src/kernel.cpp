#include "wtail/kernel.hpp"

#include <cmath>

#include "wtail/errors.hpp"

namespace wtail {

KernelSpec KernelSpec::from_name(const std::string& name) {
    if (name == "asymmetric-linear") return {KernelId::asymmetric_linear};
    if (name == "biquadratic") return {KernelId::biquadratic};
    throw config_error("unknown kernel '" + name +
                       "' (expected asymmetric-linear or biquadratic)");
}

const char* KernelSpec::name() const noexcept {
    return id == KernelId::asymmetric_linear ? "asymmetric-linear" : "biquadratic";
}

double eval_kernel(KernelSpec kernel, double u) {
    if (u < -1.0 || u > 1.0) return 0.0;
    switch (kernel.id) {
        case KernelId::asymmetric_linear:
            return 1.9 - 1.8 * u;
        case KernelId::biquadratic: {
            const double t = 1.0 - u * u;
            return (15.0 / 16.0) * t * t;
        }
    }
    return 0.0;
}

std::vector<double> kernel_values(double x, const CensoredSample& sample,
                                  Bandwidth h, KernelSpec kernel) {
    if (!(h.h > 0.0)) throw config_error("bandwidth must be positive");
    std::vector<double> values(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        values[i] = eval_kernel(kernel, (x - sample[i].x) / h.h);
    }
    return values;
}

std::vector<double> nw_weights(double x, const CensoredSample& sample,
                               Bandwidth h, KernelSpec kernel) {
    std::vector<double> w = kernel_values(x, sample, h, kernel);
    // Kahan-compensated normalizer
    double sum = 0.0, comp = 0.0;
    for (double v : w) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (!(sum > 0.0)) {
        throw empty_neighborhood("no observation within bandwidth of x = " +
                                 std::to_string(x));
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace wtail
