#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "constant_width.hpp"
#include "errors.hpp"
#include "tangent_census.hpp"

namespace curvex {

inline std::string fmt_num(double x, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x == 0.0 ? 0.0 : x);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// Rows t,x,y,z of the sphere lift over [0, 2pi).
inline std::string samples_csv(const ProjectiveCurve& c, int n) {
    std::ostringstream s;
    s << "t,x,y,z\n";
    for (int j = 0; j < n; ++j) {
        double t = kTwoPi * j / n;
        Eigen::Vector3d p = c.lift(t);
        s << fmt_num(t) << ',' << fmt_num(p.x()) << ',' << fmt_num(p.y()) << ',' << fmt_num(p.z()) << '\n';
    }
    return s.str();
}

// Rows t,x,y of the constant-width curve over [0, 2pi).
inline std::string samples_csv(const SupportFunction& sf, int n) {
    std::ostringstream s;
    s << "t,x,y\n";
    for (int j = 0; j < n; ++j) {
        double t = kTwoPi * j / n;
        Eigen::Vector2d p = sf.curve_point(t);
        s << fmt_num(t) << ',' << fmt_num(p.x()) << ',' << fmt_num(p.y()) << '\n';
    }
    return s.str();
}

struct Viewport {
    double xmin, xmax, ymin, ymax;
    double size = 600.0;

    double sx(double x) const { return (x - xmin) / (xmax - xmin) * size; }
    double sy(double y) const { return (ymax - y) / (ymax - ymin) * size; }
};

inline std::string svg_header(double size) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(size, 6) << "\" height=\""
      << fmt_num(size, 6) << "\" viewBox=\"0 0 " << fmt_num(size, 6) << ' ' << fmt_num(size, 6) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s.str();
}

inline std::string svg_polyline(const std::vector<Eigen::Vector2d>& pts, const Viewport& v, bool closed,
                                const std::string& style) {
    std::ostringstream s;
    s << "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        s << (i ? " L" : "M") << fmt_num(v.sx(pts[i].x()), 7) << ',' << fmt_num(v.sy(pts[i].y()), 7);
    if (closed) s << " Z";
    s << "\" " << style << "/>\n";
    return s.str();
}

// Constant-width curve with d-inflection markers and an optional list of
// d-circles (certificate circles or double tangent circles).
inline std::string width_svg(const SupportFunction& sf, const std::vector<DCircle>& circles,
                             const std::vector<double>& markers, int n = 1024) {
    std::vector<Eigen::Vector2d> pts;
    double r = 0.0;
    for (int j = 0; j < n; ++j) {
        pts.push_back(sf.curve_point(kTwoPi * j / n));
        r = std::max(r, pts.back().norm());
    }
    for (const auto& c : circles) r = std::max(r, c.center.norm() + c.radius);
    r *= 1.05;
    Viewport v{-r, r, -r, r};
    std::ostringstream s;
    s << svg_header(v.size);
    s << "<g id=\"curve\">\n" << svg_polyline(pts, v, true, "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"") << "</g>\n";
    if (!circles.empty()) {
        s << "<g id=\"circles\">\n";
        for (const auto& c : circles)
            s << "<circle cx=\"" << fmt_num(v.sx(c.center.x()), 7) << "\" cy=\"" << fmt_num(v.sy(c.center.y()), 7)
              << "\" r=\"" << fmt_num(c.radius / (v.xmax - v.xmin) * v.size, 7)
              << "\" fill=\"none\" stroke=\"steelblue\" stroke-dasharray=\"4 3\"/>\n";
        s << "</g>\n";
    }
    s << "<g id=\"inflections\">\n";
    for (double t : markers) {
        Eigen::Vector2d p = sf.curve_point(t);
        s << "<circle cx=\"" << fmt_num(v.sx(p.x()), 7) << "\" cy=\"" << fmt_num(v.sy(p.y()), 7)
          << "\" r=\"4\" fill=\"crimson\"/>\n";
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

// Sphere lift in longitude/latitude coordinates with inflection markers and
// double tangent chords drawn as great-circle arcs.
inline std::string sphere_svg(const ProjectiveCurve& c, const std::vector<double>& markers,
                              const std::vector<Chord>& chords, int n = 2048) {
    Viewport v{-kPi, kPi, -kPi / 2, kPi / 2};
    auto lonlat = [](const Eigen::Vector3d& p) {
        return Eigen::Vector2d(std::atan2(p.y(), p.x()), std::asin(std::clamp(p.z(), -1.0, 1.0)));
    };
    auto split_paths = [&](const std::vector<Eigen::Vector2d>& pts, const std::string& style) {
        std::string out;
        std::vector<Eigen::Vector2d> run;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!run.empty() && std::abs(pts[i].x() - run.back().x()) > kPi) {
                out += svg_polyline(run, v, false, style);
                run.clear();
            }
            run.push_back(pts[i]);
        }
        if (run.size() > 1) out += svg_polyline(run, v, false, style);
        return out;
    };
    std::vector<Eigen::Vector2d> pts;
    for (int j = 0; j <= n; ++j) pts.push_back(lonlat(c.lift(kTwoPi * j / n)));
    std::ostringstream s;
    s << svg_header(v.size);
    s << "<g id=\"curve\" transform=\"scale(1,0.5) translate(0,300)\">\n"
      << split_paths(pts, "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"") << "</g>\n";
    if (!chords.empty()) {
        s << "<g id=\"chords\" transform=\"scale(1,0.5) translate(0,300)\">\n";
        for (const auto& ch : chords) {
            for (double sign : {1.0, -1.0}) {
                std::vector<Eigen::Vector2d> seg;
                for (int j = 0; j <= 64; ++j) seg.push_back(lonlat(sign * ch.point(j / 64.0)));
                s << split_paths(seg, "fill=\"none\" stroke=\"seagreen\" stroke-width=\"1\"");
            }
        }
        s << "</g>\n";
    }
    s << "<g id=\"inflections\" transform=\"scale(1,0.5) translate(0,300)\">\n";
    for (double t : markers)
        for (double shift : {0.0, kPi}) {
            Eigen::Vector2d p = lonlat(c.lift(t + shift));
            s << "<circle cx=\"" << fmt_num(v.sx(p.x()), 7) << "\" cy=\"" << fmt_num(v.sy(p.y()), 7)
              << "\" r=\"4\" fill=\"crimson\"/>\n";
        }
    s << "</g>\n</svg>\n";
    return s.str();
}

}  // namespace curvex
