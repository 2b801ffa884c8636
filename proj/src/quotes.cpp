#include "maxent/quotes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace maxent {

namespace {

std::optional<double> mid_of(const std::optional<double>& bid, const std::optional<double>& ask) {
    if (bid && ask) {
        return 0.5 * (*bid + *ask);
    }
    if (bid) {
        return bid;
    }
    return ask;
}

bool same_strike(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

std::string describe(const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(12);
    os << what << " (" << lhs << " vs " << rhs << ")";
    return os.str();
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
          std::ostringstream os;
          os << violations.size() << " slice violation(s)";
          for (const auto& v : violations) {
              os << "; [" << v.bucket << "] " << v.what;
          }
          return os.str();
      }()),
      violations_(std::move(violations)) {}

std::optional<double> RawQuote::call_mid() const { return mid_of(call_bid, call_ask); }

std::optional<double> RawQuote::digital_mid() const { return mid_of(digital_bid, digital_ask); }

MaturitySlice::MaturitySlice(double maturity,
                             double discount_factor,
                             std::vector<double> strikes,
                             std::vector<double> calls,
                             std::vector<double> digitals)
    : maturity_(maturity),
      discount_factor_(discount_factor),
      strikes_(std::move(strikes)),
      calls_(std::move(calls)),
      digitals_(std::move(digitals)) {
    if (strikes_.empty() || strikes_.size() != calls_.size() || strikes_.size() != digitals_.size()) {
        throw DomainError("slice needs equally sized, non-empty strike/call/digital arrays");
    }
}

double MaturitySlice::bucket_mass(std::size_t i) const {
    const double next = i < last() ? digitals_[i + 1] : 0.0;
    return digitals_[i] - next;
}

double MaturitySlice::bucket_first_moment(std::size_t i) const {
    const double here = calls_[i] + strikes_[i] * digitals_[i];
    const double next = i < last() ? calls_[i + 1] + strikes_[i + 1] * digitals_[i + 1] : 0.0;
    return here - next;
}

double MaturitySlice::bucket_mean(std::size_t i) const { return bucket_first_moment(i) / bucket_mass(i); }

MaturitySlice MaturitySlice::subset(std::span<const double> keep) const {
    std::vector<double> k{strikes_.front()};
    std::vector<double> c{calls_.front()};
    std::vector<double> d{digitals_.front()};
    for (std::size_t i = 1; i < size(); ++i) {
        const bool kept = std::any_of(keep.begin(), keep.end(), [&](double s) { return same_strike(s, strikes_[i]); });
        if (kept) {
            k.push_back(strikes_[i]);
            c.push_back(calls_[i]);
            d.push_back(digitals_[i]);
        }
    }
    for (double s : keep) {
        if (s != 0.0 && std::none_of(k.begin(), k.end(), [&](double x) { return same_strike(s, x); })) {
            throw DomainError("strike " + std::to_string(s) + " not present in slice");
        }
    }
    return MaturitySlice(maturity_, discount_factor_, std::move(k), std::move(c), std::move(d));
}

std::vector<Violation> validate_slice(const MaturitySlice& slice, double slack) {
    std::vector<Violation> out;
    const auto& K = slice.strikes();
    const auto& C = slice.calls();
    const auto& D = slice.digitals();
    const std::size_t n = slice.last();

    if (!(slice.maturity() > 0.0)) {
        out.push_back({0, describe("maturity must be positive", slice.maturity(), 0.0)});
    }
    if (!(slice.discount_factor() > 0.0 && slice.discount_factor() <= 1.0)) {
        out.push_back({0, describe("discount factor outside (0,1]", slice.discount_factor(), 1.0)});
    }
    if (K.front() != 0.0) {
        out.push_back({0, describe("K_0 must be 0", K.front(), 0.0)});
    }
    if (std::abs(D.front() - 1.0) > slack) {
        out.push_back({0, describe("D_0 must be 1", D.front(), 1.0)});
    }
    if (!(C.front() > 0.0)) {
        out.push_back({0, describe("forward C_0 must be positive", C.front(), 0.0)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(K[i + 1] - K[i] > 0.0)) {
            out.push_back({i, describe("strikes not strictly increasing", K[i], K[i + 1])});
        }
        if (!(D[i] - D[i + 1] > slack)) {
            out.push_back({i, describe("digitals not strictly decreasing", D[i], D[i + 1])});
        }
        if (!(C[i] - C[i + 1] > slack)) {
            out.push_back({i, describe("calls not strictly decreasing", C[i], C[i + 1])});
        }
        const double mass = slice.bucket_mass(i);
        const double moment = slice.bucket_first_moment(i);
        if (!(moment - K[i] * mass > slack)) {
            out.push_back({i, describe("bucket mean not interior: K_i(D_i-D_i+1) >= first moment",
                                       K[i] * mass, moment)});
        }
        if (!(K[i + 1] * mass - moment > slack)) {
            out.push_back({i, describe("bucket mean not interior: first moment >= K_i+1(D_i-D_i+1)",
                                       moment, K[i + 1] * mass)});
        }
    }
    if (!(C[n] > 0.0)) {
        out.push_back({n, describe("last call must be positive", C[n], 0.0)});
    }
    if (!(D[n] > 0.0)) {
        out.push_back({n, describe("last digital must be positive", D[n], 0.0)});
    }
    return out;
}

MaturitySlice build_slice(std::span<const RawQuote> quotes,
                          double discount_factor,
                          double maturity,
                          std::optional<double> forward,
                          double slack) {
    if (!(discount_factor > 0.0 && discount_factor <= 1.0)) {
        throw DomainError("discount factor must lie in (0,1]");
    }
    std::vector<RawQuote> sorted(quotes.begin(), quotes.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RawQuote& a, const RawQuote& b) { return a.strike < b.strike; });

    std::vector<double> strikes{0.0};
    std::vector<double> calls{0.0};
    std::vector<double> digitals{1.0};
    std::optional<double> quoted_forward;

    for (const auto& q : sorted) {
        if (q.call_bid && q.call_ask && *q.call_bid > *q.call_ask) {
            throw ValidationError({{strikes.size(), describe("call bid above ask", *q.call_bid, *q.call_ask)}});
        }
        if (q.digital_bid && q.digital_ask && *q.digital_bid > *q.digital_ask) {
            throw ValidationError(
                {{strikes.size(), describe("digital bid above ask", *q.digital_bid, *q.digital_ask)}});
        }
        const auto call = q.call_mid();
        if (!call) {
            throw ValidationError({{strikes.size(), "quote at strike " + std::to_string(q.strike) + " has no call side"}});
        }
        if (q.strike == 0.0) {
            quoted_forward = *call / discount_factor;
            continue;
        }
        const auto digital = q.digital_mid();
        if (!digital) {
            throw ValidationError(
                {{strikes.size(), "quote at strike " + std::to_string(q.strike) + " has no digital side"}});
        }
        strikes.push_back(q.strike);
        calls.push_back(*call / discount_factor);
        digitals.push_back(*digital / discount_factor);
    }

    if (forward) {
        calls.front() = *forward;
    } else if (quoted_forward) {
        calls.front() = *quoted_forward;
    } else {
        throw MissingForward();
    }
    if (!(calls.front() > 0.0)) {
        throw DomainError("forward must be positive");
    }

    MaturitySlice slice(maturity, discount_factor, std::move(strikes), std::move(calls), std::move(digitals));
    if (auto violations = validate_slice(slice, slack); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return slice;
}

double call_spread_digital(std::span<const double> strikes, std::span<const double> calls, std::size_t i) {
    if (strikes.size() != calls.size()) {
        throw DomainError("strike and call arrays differ in length");
    }
    if (i == 0 || i + 1 >= strikes.size()) {
        throw BoundaryStrike(i < strikes.size() ? strikes[i] : std::numeric_limits<double>::quiet_NaN());
    }
    return -(calls[i + 1] - calls[i - 1]) / (strikes[i + 1] - strikes[i - 1]);
}

std::vector<double> digitals_from_call_spreads(std::span<const double> strikes, std::span<const double> calls) {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < strikes.size(); ++i) {
        out.push_back(call_spread_digital(strikes, calls, i));
    }
    return out;
}

std::vector<RawQuote> with_spread_digitals(std::span<const RawQuote> quotes,
                                           std::span<const double> targets,
                                           double width) {
    auto call_at = [&](double k) -> std::optional<double> {
        for (const auto& q : quotes) {
            if (same_strike(q.strike, k)) {
                return q.call_mid();
            }
        }
        return std::nullopt;
    };

    std::vector<RawQuote> out;
    for (const auto& q : quotes) {
        if (q.strike == 0.0) {
            out.push_back(q);
        }
    }
    for (double k : targets) {
        const auto here = call_at(k);
        const auto below = call_at(k - width);
        const auto above = call_at(k + width);
        if (!here) {
            throw DomainError("no call quote at strike " + std::to_string(k));
        }
        if (!below || !above) {
            throw BoundaryStrike(k);
        }
        const std::array<double, 3> ks{k - width, k, k + width};
        const std::array<double, 3> cs{*below, *here, *above};
        const double digital = call_spread_digital(ks, cs, 1);
        RawQuote r;
        r.strike = k;
        r.call_bid = here;
        r.call_ask = here;
        r.digital_bid = digital;
        r.digital_ask = digital;
        out.push_back(r);
    }
    return out;
}

} // namespace maxent
