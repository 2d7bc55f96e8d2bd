#ifndef WTAIL_ERRORS_HPP
#define WTAIL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wtail {

/// Error families, used by the CLI to map exceptions onto exit codes.
enum class error_family { parse = 2, config = 3, estimation = 4 };

class error : public std::runtime_error {
public:
    error(error_family family, const std::string& what)
        : std::runtime_error(what), family_(family) {}
    error_family family() const noexcept { return family_; }

private:
    error_family family_;
};

/// No observation carries positive kernel weight at the requested covariate.
class empty_neighborhood : public error {
public:
    explicit empty_neighborhood(const std::string& what)
        : error(error_family::estimation, what) {}
};

/// Threshold count k outside its admissible range for the given sample.
class invalid_k : public error {
public:
    explicit invalid_k(const std::string& what)
        : error(error_family::estimation, what) {}
};

class non_positive_data : public error {
public:
    explicit non_positive_data(const std::string& what)
        : error(error_family::estimation, what) {}
};

/// Estimated cumulative hazard is zero at the threshold: no uncensored mass
/// at or below y_n.
class zero_hazard_at_threshold : public error {
public:
    explicit zero_hazard_at_threshold(const std::string& what)
        : error(error_family::estimation, what) {}
};

/// The tail sum in the denominator vanished: censoring wiped out the
/// uncensored mass above the threshold.
class zero_denominator : public error {
public:
    explicit zero_denominator(const std::string& what)
        : error(error_family::estimation, what) {}
};

class invalid_level : public error {
public:
    explicit invalid_level(const std::string& what)
        : error(error_family::estimation, what) {}
};

class empty_input : public error {
public:
    explicit empty_input(const std::string& what)
        : error(error_family::estimation, what) {}
};

class parse_error : public error {
public:
    explicit parse_error(const std::string& what)
        : error(error_family::parse, what) {}
};

class config_error : public error {
public:
    explicit config_error(const std::string& what)
        : error(error_family::config, what) {}
};

}  // namespace wtail

#endif
