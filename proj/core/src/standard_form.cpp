#include "safefilter/lmi/standard_form.hpp"

#include <fstream>
#include <stdexcept>

namespace safefilter::lmi {

const IndexMap::Entry& IndexMap::by_id(int var_id) const {
    for (const auto& e : entries)
        if (e.var.id == var_id) return e;
    throw std::out_of_range("IndexMap: unknown variable id");
}

Matrix IndexMap::extract(int var_id, const Vector& y) const {
    const auto& e = by_id(var_id);
    return devectorize(e.var, y.segment(e.offset, e.var.scalar_count()));
}

VarAssignment IndexMap::extract_all(const Vector& y) const {
    VarAssignment out;
    for (const auto& e : entries) out[e.var.id] = extract(e.var.id, y);
    return out;
}

namespace {

std::vector<Triplet> to_triplets(const Matrix& m, double drop_tol = 0.0) {
    std::vector<Triplet> t;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > drop_tol)
                t.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
    return t;
}

} // namespace

StandardConicForm to_standard_form(const LmiProblem& p) {
    StandardConicForm f;
    Eigen::Index total = 0;
    for (const auto& v : p.variables()) {
        f.index_map.entries.push_back({v, total});
        total += v.scalar_count();
    }
    f.index_map.total = total;

    f.objective = Vector::Zero(total);
    f.objective_sign = (p.sense() == LmiProblem::Sense::Maximize) ? -1.0 : 1.0;
    for (const auto& [id, cmat] : p.objective_terms()) {
        const auto& e = f.index_map.by_id(id);
        for (Eigen::Index k = 0; k < e.var.scalar_count(); ++k) {
            const Matrix bk = basis_matrix(e.var, k);
            // <C, B_k>, negated for maximization so the backend always minimizes
            f.objective(e.offset + k) = f.objective_sign * (cmat.array() * bk.array()).sum();
        }
    }

    VarAssignment zeros;
    for (const auto& v : p.variables()) zeros[v.id] = Matrix::Zero(v.rows, v.cols);

    for (const auto& c : p.constraints()) {
        ConeBlockData blk;
        blk.dim = static_cast<int>(c.expr.dim());
        blk.label = c.label;
        blk.constant = to_triplets(sym_part(c.expr.eval(zeros)));
        for (int id : c.expr.referenced_vars()) {
            const auto& e = f.index_map.by_id(id);
            for (Eigen::Index k = 0; k < e.var.scalar_count(); ++k) {
                Matrix fi = sym_part(c.expr.derivative(VarRef{id}, basis_matrix(e.var, k)));
                if (fi.cwiseAbs().maxCoeff() == 0.0) continue;
                blk.coefficients.emplace_back(static_cast<int>(e.offset + k), to_triplets(fi));
            }
        }
        f.blocks.push_back(std::move(blk));
    }
    return f;
}

void write_debug_dump(const StandardConicForm& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_debug_dump: cannot open " + path);
    os.precision(17);
    os << "# vars " << f.index_map.total << " blocks " << f.blocks.size() << "\n";
    os << "# objective (index value)\n";
    for (Eigen::Index i = 0; i < f.objective.size(); ++i)
        if (f.objective(i) != 0.0) os << i << " " << f.objective(i) << "\n";
    for (size_t b = 0; b < f.blocks.size(); ++b) {
        const auto& blk = f.blocks[b];
        os << "block " << b << " dim " << blk.dim << " label " << blk.label << "\n";
        os << "F0\n";
        for (const auto& t : blk.constant) os << t.row << " " << t.col << " " << t.value << "\n";
        for (const auto& [idx, trips] : blk.coefficients) {
            os << "F " << idx << "\n";
            for (const auto& t : trips) os << t.row << " " << t.col << " " << t.value << "\n";
        }
    }
}

} // namespace safefilter::lmi
