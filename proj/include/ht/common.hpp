#ifndef HT_COMMON_HPP
#define HT_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ht {

// Error taxonomy. CLI maps these onto exit codes (domain/numeric -> 4, data -> 3).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carrier for an observed series X_1..X_n. Values must be finite.
struct Sample {
    std::vector<double> values;
    std::string name;
    bool is_returns = false;

    std::size_t size() const { return values.size(); }
};

// Compensated (Kahan) summation; the accumulated error term matters for the
// harmonic numbers and the long Monte Carlo reductions.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double sum(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return s.value();
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw domain_error("mean of empty sample");
    return sum(v) / static_cast<double>(v.size());
}

// Population central moments m2, m4 and the raw (non-excess) kurtosis m4/m2^2.
inline double raw_kurtosis(const std::vector<double>& v) {
    if (v.size() < 2) throw domain_error("kurtosis needs n >= 2");
    double m = mean(v);
    KahanSum s2, s4;
    for (double x : v) {
        double d = x - m;
        double d2 = d * d;
        s2.add(d2);
        s4.add(d2 * d2);
    }
    double n = static_cast<double>(v.size());
    double m2 = s2.value() / n;
    if (m2 <= 0.0) throw domain_error("kurtosis of constant sample");
    return (s4.value() / n) / (m2 * m2);
}

inline double variance(const std::vector<double>& v) {
    double m = mean(v);
    KahanSum s2;
    for (double x : v) s2.add((x - m) * (x - m));
    return s2.value() / static_cast<double>(v.size());
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace ht

#endif  // HT_COMMON_HPP
