#include "stripcap/kernel.hpp"

#include <cmath>

namespace stripcap {

namespace {

struct LocalFrame {
    double u;  // tangential coordinate of obs, from segment start
    double h;  // normal coordinate of obs
    double L;
    Vec2 tau;
    Vec2 nu;
};

LocalFrame local_frame(const Point& obs, const Segment& seg) {
    LocalFrame f;
    Vec2 d = seg.b - seg.a;
    f.L = seg.length;
    f.tau = {d.x / f.L, d.y / f.L};
    f.nu = f.tau.perp();
    Vec2 r = obs - seg.a;
    f.u = r.dot(f.tau);
    f.h = r.dot(f.nu);
    return f;
}

}  // namespace

double log_potential_integral(const Point& obs, const Segment& seg) {
    LocalFrame f = local_frame(obs, seg);
    auto F = [&](double x) {
        double r2 = x * x + f.h * f.h;
        double v = -x;
        if (r2 > 0.0) v += 0.5 * x * std::log(r2);
        if (f.h != 0.0) v += f.h * std::atan(x / f.h);
        return v;
    };
    return F(f.L - f.u) - F(-f.u);
}

double normal_field_integral(const Point& obs, const Vec2& n, const Segment& seg) {
    LocalFrame f = local_frame(obs, seg);
    double nt = n.dot(f.tau);
    double nn = n.dot(f.nu);
    double r0 = f.u * f.u + f.h * f.h;              // |obs - start|^2
    double r1 = (f.u - f.L) * (f.u - f.L) + f.h * f.h;  // |obs - end|^2
    double v = 0.0;
    if (nt != 0.0 && r0 > 0.0 && r1 > 0.0) v += 0.5 * nt * std::log(r0 / r1);
    if (nn != 0.0 && f.h != 0.0)
        v += nn * (std::atan(f.u / f.h) - std::atan((f.u - f.L) / f.h));
    return v;
}

}  // namespace stripcap
