#ifndef SAFEFILTER_LMI_STANDARD_FORM_HPP
#define SAFEFILTER_LMI_STANDARD_FORM_HPP

#include <string>
#include <vector>

#include "safefilter/lmi/problem.hpp"

namespace safefilter::lmi {

struct Triplet {
    int row;
    int col;
    double value;
};

/// One semidefinite cone F0 + sum_i y_i Fi >= 0 in sparse triplet form.
struct ConeBlockData {
    int dim = 0;
    std::string label;
    std::vector<Triplet> constant;                                // F0
    std::vector<std::pair<int, std::vector<Triplet>>> coefficients;  // (var coord, Fi)
};

/// Map from scalarized coordinates back to named matrix variables.
struct IndexMap {
    struct Entry {
        MatrixVar var;
        Eigen::Index offset = 0;  // first scalar coordinate
    };
    std::vector<Entry> entries;
    Eigen::Index total = 0;

    const Entry& by_id(int var_id) const;
    /// Extracts the matrix value of one variable from the full coordinate vector.
    Matrix extract(int var_id, const Vector& y) const;
    VarAssignment extract_all(const Vector& y) const;
};

/// Vectorized conic program: minimize objective . y subject to each block PSD.
/// Maximization problems are lowered with a negated objective;
/// `objective_sign` restores the user-facing value.
struct StandardConicForm {
    Vector objective;            // minimize objective . y
    double objective_sign = 1.0;  // user objective = objective_sign * (objective . y)
    std::vector<ConeBlockData> blocks;
    IndexMap index_map;
};

StandardConicForm to_standard_form(const LmiProblem& p);

/// Text dump for external cross-checking: per block, `i j value` lines
/// (0-based) for F0 and each coefficient matrix.
void write_debug_dump(const StandardConicForm& f, const std::string& path);

} // namespace safefilter::lmi

#endif
