#pragma once

#include "extmod/quiver.hpp"

#include <sstream>
#include <string>

namespace extmod {

namespace detail {
/// Entries equal to a configured parameter (other than 0 and +-1) render
/// as the symbol; everything else is the literal rational.
inline std::string latex_entry(const WeightSpec& spec, const Rat& v) {
    if (v != 0 && v != 1 && v != -1)
        for (int i = 3; i <= spec.t(); ++i) {
            if (v == spec.lambda(i))
                return "\\lambda_{" + std::to_string(i) + "}";
            if (v == -spec.lambda(i))
                return "-\\lambda_{" + std::to_string(i) + "}";
        }
    if (denominator(v) == 1)
        return numerator(v).str();
    return "\\tfrac{" + numerator(v).str() + "}{" + denominator(v).str() + "}";
}
} // namespace detail

/// One pmatrix environment per arrow, annotated with its endpoints.
inline std::string rep_to_latex(const Representation& r) {
    const auto& q = *r.quiver;
    std::ostringstream os;
    os << "% weights " << q.spec().describe() << "\n";
    os << "% dimensions:";
    for (std::size_t v = 0; v < q.vertex_count(); ++v)
        os << " " << q.vertices()[v].id << "=" << r.dims[v];
    os << "\n";
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const auto& a = q.arrows()[k];
        const Mat& m = r.mats[k];
        os << "% " << a.id << ": " << q.vertices()[a.from].id << " -> "
           << q.vertices()[a.to].id << "\n";
        os << "M_{" << a.id << "} = \\begin{pmatrix}\n";
        if (m.rows() == 0 || m.cols() == 0) {
            os << "  % empty (" << m.rows() << " x " << m.cols() << ")\n";
        } else {
            for (std::size_t rr = 0; rr < m.rows(); ++rr) {
                os << "  ";
                for (std::size_t cc = 0; cc < m.cols(); ++cc) {
                    os << detail::latex_entry(q.spec(), m(rr, cc));
                    if (cc + 1 < m.cols())
                        os << " & ";
                }
                os << (rr + 1 < m.rows() ? " \\\\" : "") << "\n";
            }
        }
        os << "\\end{pmatrix}\n\n";
    }
    return os.str();
}

} // namespace extmod
