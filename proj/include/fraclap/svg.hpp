#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"

namespace fraclap {

enum class PlotKind { Line, Step, Scatter, Bar };

/// Minimal static SVG plotter: one series, fixed viewport, no interactivity.
/// Coordinates are emitted with %.6g so output is byte-stable.
class SvgPlot {
public:
    SvgPlot(std::string title, PlotKind kind) : title_(std::move(title)), kind_(kind) {}

    void add(double x, double y) {
        xs_.push_back(x);
        ys_.push_back(y);
    }

    void write(const std::string& path) const {
        if (xs_.empty()) throw domain_error("SvgPlot: empty series");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw error("cannot open file for writing: " + path);

        const double w = 800, h = 600, ml = 70, mr = 20, mt = 40, mb = 50;
        double xmin = *std::min_element(xs_.begin(), xs_.end());
        double xmax = *std::max_element(xs_.begin(), xs_.end());
        double ymin = std::min(0.0, *std::min_element(ys_.begin(), ys_.end()));
        double ymax = *std::max_element(ys_.begin(), ys_.end());
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymax = ymin + 1;
        auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
        auto Y = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
        auto num = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", v);
            return std::string(buf);
        };

        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
               "viewBox=\"0 0 800 600\">\n";
        out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
        out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" << title_ << "</text>\n";
        // axes
        out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(h - mb) << "\" x2=\"" << num(w - mr)
            << "\" y2=\"" << num(h - mb) << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(h - mb) << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = xmin + (xmax - xmin) * i / 4.0;
            const double fy = ymin + (ymax - ymin) * i / 4.0;
            out << "<text x=\"" << num(X(fx)) << "\" y=\"" << num(h - mb + 18)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(fx)
                << "</text>\n";
            out << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(Y(fy) + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(fy)
                << "</text>\n";
        }

        switch (kind_) {
            case PlotKind::Line: {
                out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
                for (std::size_t i = 0; i < xs_.size(); ++i)
                    out << num(X(xs_[i])) << ',' << num(Y(ys_[i])) << ' ';
                out << "\"/>\n";
                break;
            }
            case PlotKind::Step: {
                out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
                for (std::size_t i = 0; i < xs_.size(); ++i) {
                    if (i > 0) out << num(X(xs_[i])) << ',' << num(Y(ys_[i - 1])) << ' ';
                    out << num(X(xs_[i])) << ',' << num(Y(ys_[i])) << ' ';
                }
                out << "\"/>\n";
                break;
            }
            case PlotKind::Scatter: {
                for (std::size_t i = 0; i < xs_.size(); ++i)
                    out << "<circle cx=\"" << num(X(xs_[i])) << "\" cy=\"" << num(Y(ys_[i]))
                        << "\" r=\"2\" fill=\"#1f77b4\"/>\n";
                break;
            }
            case PlotKind::Bar: {
                const double bw = std::max(1.0, (w - ml - mr) / (1.5 * static_cast<double>(xs_.size())));
                for (std::size_t i = 0; i < xs_.size(); ++i) {
                    const double y0 = Y(0), y1 = Y(ys_[i]);
                    out << "<rect x=\"" << num(X(xs_[i]) - bw / 2) << "\" y=\"" << num(std::min(y0, y1))
                        << "\" width=\"" << num(bw) << "\" height=\"" << num(std::abs(y0 - y1))
                        << "\" fill=\"#1f77b4\"/>\n";
                }
                break;
            }
        }
        out << "</svg>\n";
    }

private:
    std::string title_;
    PlotKind kind_;
    std::vector<double> xs_, ys_;
};

} // namespace fraclap
