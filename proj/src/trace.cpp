#include "rpca/trace.hpp"

#include <cstdio>
#include <fstream>

namespace rpca {

void SolveTrace::to_csv(const std::string& path, bool nonconvex_columns) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    if (nonconvex_columns) {
        out << "iter,F,f,grad_norm,balancedness";
        if (has_errors) out << ",err_fro,err_op,err_inf,err_2inf";
        out << "\n";
        char buf[256];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g",
                          static_cast<long long>(r.iter), r.objective,
                          r.f_smooth, r.grad_norm, r.balancedness);
            out << buf;
            if (has_errors) {
                std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g",
                              r.err_fro, r.err_op, r.err_inf, r.err_2inf);
                out << buf;
            }
            out << "\n";
        }
    } else {
        out << "iter,objective,kkt_pt_r1,kkt_ptperp_r1,kkt_r2_off,wall_ms\n";
        char buf[256];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf),
                          "%lld,%.17g,%.17g,%.17g,%.17g,%.3f\n",
                          static_cast<long long>(r.iter), r.objective,
                          r.kkt_pt_r1, r.kkt_ptperp_r1, r.kkt_r2_off,
                          r.wall_ms);
            out << buf;
        }
    }
}

}  // namespace rpca
