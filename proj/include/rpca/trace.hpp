#pragma once

#include <string>
#include <vector>

#include "rpca/matrix.hpp"

namespace rpca {

// Per-iteration solver record. Fields unused by a given solver stay zero;
// err_* fields are populated only when ground truth is available.
struct TraceRow {
    Index iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double balancedness = 0.0;
    double f_smooth = 0.0;  // nonconvex f (objective minus l1 term)
    double kkt_pt_r1 = 0.0;
    double kkt_ptperp_r1 = 0.0;
    double kkt_r2_off = 0.0;
    double err_fro = 0.0;
    double err_op = 0.0;
    double err_inf = 0.0;
    double err_2inf = 0.0;
    double wall_ms = 0.0;
};

struct SolveTrace {
    std::vector<TraceRow> rows;
    bool has_errors = false;

    void to_csv(const std::string& path, bool nonconvex_columns) const;
};

}  // namespace rpca
