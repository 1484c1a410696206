#include "tfstar/profile.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "tfstar/error.hpp"

namespace tfstar {

void RadialProfile::append(const RadialProfile& other) {
    if (other.empty()) return;
    tail_e = other.tail_e;
    tail_p = other.tail_p;
    const bool keep_d2 = (empty() || has_second_derivatives()) && other.has_second_derivatives();
    if (!keep_d2) {
        d2u_e.clear();
        d2u_p.clear();
    }
    std::size_t start = 0;
    if (!empty() && other.r.front() <= r.back()) start = 1;
    for (std::size_t i = start; i < other.size(); ++i) {
        r.push_back(other.r[i]);
        u_e.push_back(other.u_e[i]);
        u_p.push_back(other.u_p[i]);
        du_e.push_back(other.du_e[i]);
        du_p.push_back(other.du_p[i]);
        if (keep_d2) {
            d2u_e.push_back(other.d2u_e[i]);
            d2u_p.push_back(other.d2u_p[i]);
        }
    }
}

void RadialProfile::validate() const {
    const std::size_t n = r.size();
    if (n < 2) throw SolverError(ErrorCode::InvalidProfile, "profile needs at least two nodes");
    if (u_e.size() != n || u_p.size() != n || du_e.size() != n || du_p.size() != n) {
        throw SolverError(ErrorCode::InvalidProfile, "profile columns have mismatched lengths");
    }
    if (!(d2u_e.empty() && d2u_p.empty()) && !has_second_derivatives()) {
        throw SolverError(ErrorCode::InvalidProfile, "second-derivative columns have mismatched lengths");
    }
    if (r.front() < 0.0) throw SolverError(ErrorCode::InvalidProfile, "negative radius");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(r[i] > r[i - 1])) throw SolverError(ErrorCode::InvalidProfile, "radii must be strictly increasing");
    }
}

HermiteCurve::HermiteCurve(std::span<const double> x, std::span<const double> f, std::span<const double> df,
                           std::span<const double> d2f)
    : x_(x), f_(f), df_(df), d2f_(d2f.size() == x.size() ? d2f : std::span<const double>{}) {}

double HermiteCurve::eval(std::size_t i, double x, int order) const {
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double f0 = f_[i], f1 = f_[i + 1];
    // A species that is zero at both ends of an interval has vanished there;
    // its one-sided slope at the vanishing radius must not leak across.
    if (f0 == 0.0 && f1 == 0.0) return 0.0;
    const double g0 = df_[i] * h, g1 = df_[i + 1] * h;
    // Monomial coefficients in t on [0, 1].
    double a[6] = {f0, g0, 0.0, 0.0, 0.0, 0.0};
    if (d2f_.empty()) {
        a[2] = 3.0 * (f1 - f0) - 2.0 * g0 - g1;
        a[3] = 2.0 * (f0 - f1) + g0 + g1;
    } else {
        const double c0 = d2f_[i] * h * h, c1 = d2f_[i + 1] * h * h;
        const double r0 = f1 - (f0 + g0 + 0.5 * c0);
        const double r1 = g1 - (g0 + c0);
        const double r2 = c1 - c0;
        a[2] = 0.5 * c0;
        a[3] = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
        a[4] = -15.0 * r0 + 7.0 * r1 - r2;
        a[5] = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
    }
    switch (order) {
        case 0:
            return a[0] + t * (a[1] + t * (a[2] + t * (a[3] + t * (a[4] + t * a[5]))));
        case 1:
            return (a[1] + t * (2 * a[2] + t * (3 * a[3] + t * (4 * a[4] + t * 5 * a[5])))) / h;
        default:
            return (2 * a[2] + t * (6 * a[3] + t * (12 * a[4] + t * 20 * a[5]))) / (h * h);
    }
}

std::size_t HermiteCurve::locate(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return intervals() - 1;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double HermiteCurve::operator()(double x) const {
    if (x <= x_.front()) return f_.front();
    if (x >= x_.back()) return f_.back();
    return eval(locate(x), x, 0);
}

ProfileSample sample(const RadialProfile& p, double r) {
    const HermiteCurve ce(p.r, p.u_e, p.du_e, p.d2u_e);
    const HermiteCurve cp(p.r, p.u_p, p.du_p, p.d2u_p);
    const std::size_t i = ce.locate(r);
    return {r, ce.eval(i, r, 0), cp.eval(i, r, 0), ce.eval(i, r, 1), cp.eval(i, r, 1)};
}

void write_profile_csv(const RadialProfile& p, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw SolverError(ErrorCode::Io, "cannot open " + path + " for writing");
    std::fprintf(f, "r,u_e,u_p,du_e,du_p,rho_e,rho_p\n");
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.r[i], p.u_e[i], p.u_p[i], p.du_e[i],
                     p.du_p[i], pow32(p.u_e[i]), pow32(p.u_p[i]));
    }
    if (std::fclose(f) != 0) throw SolverError(ErrorCode::Io, "error writing " + path);
}

RadialProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError(ErrorCode::Io, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,u_e,u_p,du_e,du_p", 0) != 0) {
        throw SolverError(ErrorCode::Io, path + ": expected header r,u_e,u_p,du_e,du_p,...");
    }
    RadialProfile p;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[5];
        const char* s = line.c_str();
        char* end = nullptr;
        for (int k = 0; k < 5; ++k) {
            v[k] = std::strtod(s, &end);
            if (end == s) throw SolverError(ErrorCode::Io, path + ": bad number on line " + std::to_string(lineno));
            s = end;
            if (k < 4) {
                if (*s != ',') throw SolverError(ErrorCode::Io, path + ": missing column on line " + std::to_string(lineno));
                ++s;
            }
        }
        p.r.push_back(v[0]);
        p.u_e.push_back(v[1]);
        p.u_p.push_back(v[2]);
        p.du_e.push_back(v[3]);
        p.du_p.push_back(v[4]);
    }
    p.validate();
    return p;
}

RadialProfile rescale(const RadialProfile& p, double stretch, double amp) {
    RadialProfile out = p;
    const double d1 = amp / stretch, d2 = amp / (stretch * stretch);
    for (auto& x : out.r) x *= stretch;
    for (auto& x : out.u_e) x *= amp;
    for (auto& x : out.u_p) x *= amp;
    for (auto& x : out.du_e) x *= d1;
    for (auto& x : out.du_p) x *= d1;
    for (auto& x : out.d2u_e) x *= d2;
    for (auto& x : out.d2u_p) x *= d2;
    const double s4 = stretch * stretch * stretch * stretch;
    out.tail_e *= amp * s4;
    out.tail_p *= amp * s4;
    return out;
}

}  // namespace tfstar
