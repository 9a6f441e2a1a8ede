#include "svstokes/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"

namespace svstokes {

std::array<int, 10> DofMap::local_nodes(const MeshTopology& topo, int t) const {
    std::array<int, 10> out{};
    const auto& tri = topo.triangle(t);
    for (int k = 0; k < 3; ++k) out[k] = vertex_node[tri[k]];
    for (int k = 0; k < 3; ++k) {
        const int e = topo.triangle_edges(t)[k];
        const int a = tri[(k + 1) % 3];
        const bool forward = topo.edge(e).v[0] == a;
        out[3 + 2 * k] = edge_node[e][forward ? 0 : 1];
        out[4 + 2 * k] = edge_node[e][forward ? 1 : 0];
    }
    out[9] = triangle_node[t];
    return out;
}

DofMap number_dofs(const MeshTopology& topo) {
    DofMap dm;
    int node = 0;
    std::vector<DofKey> keys;
    auto add = [&](DofKey::Entity ent, int index, int slot) {
        keys.push_back({ent, index, slot, 0});
        keys.push_back({ent, index, slot, 1});
        return node++;
    };
    dm.vertex_node.assign(topo.num_vertices(), -1);
    for (int v = 0; v < topo.num_vertices(); ++v) {
        if (!topo.on_boundary(v)) dm.vertex_node[v] = add(DofKey::Entity::Vertex, v, 0);
    }
    dm.edge_node.assign(topo.num_edges(), {-1, -1});
    for (int e = 0; e < topo.num_edges(); ++e) {
        if (topo.edge(e).boundary()) continue;
        dm.edge_node[e][0] = add(DofKey::Entity::Edge, e, 0);
        dm.edge_node[e][1] = add(DofKey::Entity::Edge, e, 1);
    }
    dm.triangle_node.resize(topo.num_triangles());
    for (int t = 0; t < topo.num_triangles(); ++t) dm.triangle_node[t] = add(DofKey::Entity::Triangle, t, 0);
    dm.n_nodes = node;
    dm.n_velocity = 2 * node;
    dm.n_pressure = 6 * topo.num_triangles();
    dm.velocity_keys = std::move(keys);
    return dm;
}

namespace {

struct LocalBasis {
    // per quadrature point: cubic values, cubic gradients, quadratic values
    std::vector<std::array<double, 10>> psi;
    std::vector<std::array<Vec2, 10>> grad;
    std::vector<std::array<double, 6>> phi;
    std::vector<double> w;
};

LocalBasis local_basis(const TriangleGeom& g) {
    const auto& cb = poly::cubic_lagrange_basis();
    const auto& qb = poly::quad_lagrange_basis();
    LocalBasis lb;
    for (const auto& q : quadrature::triangle_degree6()) {
        std::array<double, 10> v{};
        std::array<Vec2, 10> d{};
        std::array<double, 6> p{};
        for (int n = 0; n < 10; ++n) {
            v[n] = poly::eval(cb[n], q.bary);
            d[n] = poly::gradient(cb[n], g, q.bary);
        }
        for (int i = 0; i < 6; ++i) p[i] = poly::eval(qb[i], q.bary);
        lb.psi.push_back(v);
        lb.grad.push_back(d);
        lb.phi.push_back(p);
        lb.w.push_back(q.weight * g.area);
    }
    return lb;
}

}  // namespace

Matrix assemble_divergence(const MeshTopology& topo, const DofMap& dm) {
    Matrix B = Matrix::Zero(dm.n_pressure, dm.n_velocity);
    for (int t = 0; t < topo.num_triangles(); ++t) {
        const LocalBasis lb = local_basis(topo.geom(t));
        const auto nodes = dm.local_nodes(topo, t);
        for (int n = 0; n < 10; ++n) {
            if (nodes[n] < 0) continue;
            for (int c = 0; c < 2; ++c) {
                const int col = DofMap::velocity_dof(nodes[n], c);
                for (int i = 0; i < 6; ++i) {
                    double s = 0.0;
                    for (std::size_t q = 0; q < lb.w.size(); ++q) s += lb.w[q] * lb.phi[q][i] * lb.grad[q][n][c];
                    B(DofMap::pressure_dof(t, i), col) += s;
                }
            }
        }
    }
    return B;
}

Norms assemble_norms(const MeshTopology& topo, const DofMap& dm, bool seminorm) {
    Norms out;
    out.A = Matrix::Zero(dm.n_velocity, dm.n_velocity);
    out.M = Matrix::Zero(dm.n_pressure, dm.n_pressure);
    for (int t = 0; t < topo.num_triangles(); ++t) {
        const LocalBasis lb = local_basis(topo.geom(t));
        const auto nodes = dm.local_nodes(topo, t);
        for (int n = 0; n < 10; ++n) {
            if (nodes[n] < 0) continue;
            for (int m = 0; m < 10; ++m) {
                if (nodes[m] < 0) continue;
                double s = 0.0;
                for (std::size_t q = 0; q < lb.w.size(); ++q) {
                    s += lb.w[q] * lb.grad[q][n].dot(lb.grad[q][m]);
                    if (!seminorm) s += lb.w[q] * lb.psi[q][n] * lb.psi[q][m];
                }
                for (int c = 0; c < 2; ++c) {
                    out.A(DofMap::velocity_dof(nodes[n], c), DofMap::velocity_dof(nodes[m], c)) += s;
                }
            }
        }
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                double s = 0.0;
                for (std::size_t q = 0; q < lb.w.size(); ++q) s += lb.w[q] * lb.phi[q][i] * lb.phi[q][j];
                out.M(DofMap::pressure_dof(t, i), DofMap::pressure_dof(t, j)) = s;
            }
        }
    }
    return out;
}

Matrix pressure_constraints(const MeshTopology& topo, const MeshClassification& mc, const DofMap& dm) {
    std::vector<int> singular;
    for (const VertexReport& r : mc.reports) {
        if (r.singular) singular.push_back(r.vertex);
    }
    Matrix C = Matrix::Zero(1 + static_cast<int>(singular.size()), dm.n_pressure);
    for (int t = 0; t < topo.num_triangles(); ++t) {
        const LocalBasis lb = local_basis(topo.geom(t));
        for (int i = 0; i < 6; ++i) {
            double s = 0.0;
            for (std::size_t q = 0; q < lb.w.size(); ++q) s += lb.w[q] * lb.phi[q][i];
            C(0, DofMap::pressure_dof(t, i)) = s;
        }
    }
    for (std::size_t r = 0; r < singular.size(); ++r) {
        const VertexPatch p = enumerate_patch(topo, singular[r]);
        for (int j = 1; j <= p.N(); ++j) {
            std::vector<double> e(p.N(), 0.0);
            e[j - 1] = 1.0;
            C(1 + r, DofMap::pressure_dof(p.tri(j), topo.slot(p.tri(j), p.center))) = alternating_sum(e);
        }
    }
    return C;
}

Matrix constrained_basis(const Matrix& C) {
    const int n = static_cast<int>(C.cols());
    if (C.rows() == 0) return Matrix::Identity(n, n);
    Eigen::ColPivHouseholderQR<Matrix> qr(C.transpose());
    const int r = static_cast<int>(qr.rank());
    const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    return Q.rightCols(n - r);
}

RankResult divergence_rank(const Matrix& B, const MeshTopology& topo, int sigma, double tol) {
    RankResult r;
    r.expected_dim = 6 * topo.num_triangles() - 1 - sigma;
    if (B.size() > 0) {
        Eigen::BDCSVD<Matrix> svd(B);
        const Vector s = svd.singularValues();
        r.singular_values.assign(s.data(), s.data() + s.size());
    }
    r.sigma_max = r.singular_values.empty() ? 0.0 : r.singular_values.front();
    const double thr = tol * r.sigma_max;
    r.accepted_min = std::numeric_limits<double>::infinity();
    for (double s : r.singular_values) {
        if (r.sigma_max > 0.0 && s > thr) {
            ++r.rank;
            r.accepted_min = std::min(r.accepted_min, s);
        } else {
            r.rejected_max = std::max(r.rejected_max, s);
        }
    }
    if (r.rank == 0) r.accepted_min = 0.0;
    r.gap = r.rejected_max > 0.0 ? r.accepted_min / r.rejected_max : std::numeric_limits<double>::infinity();
    if (r.rank > 0 && r.gap <= 10.0) {
        throw NumericalIndeterminacy("singular-value gap " + std::to_string(r.gap) + " at the rank threshold");
    }
    r.nullity = static_cast<int>(B.cols()) - r.rank;
    r.K = r.expected_dim - r.rank;
    if (r.K < 0) throw InvariantViolation("divergence rank exceeds the constrained pressure dimension");
    return r;
}

InfSup infsup_constant(const Matrix& A, const Matrix& B, const Matrix& M, const Matrix& Qb, double tol) {
    InfSup out;
    const int nq = static_cast<int>(Qb.cols());
    if (nq == 0) return out;
    const Matrix Bq = B.transpose() * Qb;
    Matrix S = Matrix::Zero(nq, nq);
    if (A.rows() > 0) {
        Eigen::LLT<Matrix> llt(A);
        if (llt.info() != Eigen::Success) throw InvariantViolation("velocity Gram matrix is not positive definite");
        S = Bq.transpose() * llt.solve(Bq);
    }
    S = 0.5 * (S + S.transpose());
    Matrix Mq = Qb.transpose() * M * Qb;
    Mq = 0.5 * (Mq + Mq.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(S, Mq, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalIndeterminacy("Schur complement eigenproblem failed");
    const Vector lam = es.eigenvalues();
    out.eigenvalues.assign(lam.data(), lam.data() + lam.size());
    const double lmax = lam.maxCoeff();
    out.beta_full = std::sqrt(std::max(lam.minCoeff(), 0.0));
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] <= tol * lmax) {
            ++out.zero_modes;
        } else if (out.beta == 0.0) {
            out.beta = std::sqrt(lam[i]);
        }
    }
    return out;
}

Matrix spurious_modes(const Matrix& B, const Matrix& M, const Matrix& Qb, double tol) {
    const int nq = static_cast<int>(Qb.cols());
    if (nq == 0) return Matrix(M.rows(), 0);
    const Matrix Bq = B.transpose() * Qb;
    Eigen::BDCSVD<Matrix> svd(Bq, Eigen::ComputeFullV);
    const Vector s = svd.singularValues();
    const double thr = tol * (s.size() ? s[0] : 0.0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) {
        if (s[i] > thr) ++rank;
    }
    if (rank == nq) return Matrix(M.rows(), 0);
    Matrix Q = Qb * svd.matrixV().rightCols(nq - rank);
    const Matrix G = Q.transpose() * M * Q;
    Eigen::LLT<Matrix> llt(G);
    const Matrix Linv = llt.matrixL().solve(Matrix::Identity(G.rows(), G.cols()));
    Q = Q * Linv.transpose();
    // fix signs so the largest entry of each mode is positive
    for (int c = 0; c < Q.cols(); ++c) {
        Eigen::Index i;
        Q.col(c).cwiseAbs().maxCoeff(&i);
        if (Q(i, c) < 0) Q.col(c) *= -1.0;
    }
    return Q;
}

VertexValues pressure_vertex_values(const MeshTopology& topo, const Vector& q) {
    VertexValues out(topo.num_triangles());
    for (int t = 0; t < topo.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) out[t][k] = q[DofMap::pressure_dof(t, k)];
    }
    return out;
}

double alternation_fraction(const MeshTopology& topo, const VertexValues& q, double tol) {
    double scale = 0.0;
    for (const auto& a : q) {
        for (double x : a) scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) return 0.0;
    int counted = 0, alternating = 0;
    for (int z = 0; z < topo.num_vertices(); ++z) {
        if (topo.on_boundary(z)) continue;
        const VertexPatch p = enumerate_patch(topo, z);
        std::vector<double> nz;
        for (int j = 1; j <= p.N(); ++j) {
            const double v = q[p.tri(j)][topo.slot(p.tri(j), z)];
            if (std::abs(v) > tol * scale) nz.push_back(v);
        }
        if (nz.empty()) continue;
        ++counted;
        bool ok = nz.size() % 2 == 0;
        for (std::size_t i = 0; ok && i < nz.size(); ++i) ok = nz[i] * nz[(i + 1) % nz.size()] < 0;
        if (ok) ++alternating;
    }
    return counted ? double(alternating) / counted : 0.0;
}

SplineDims strang_dimensions(const MeshCounts& c, int sigma_i, int sigma_b, int K) {
    SplineDims s;
    const int sigma = sigma_i + sigma_b;
    s.raw = 2 * c.E0 - c.E + 3 * c.V0 + sigma + K;
    s.dim_s4 = std::max(0, s.raw);
    s.strang = c.E + 4 * c.V - c.V0 + sigma_i;
    s.identity_lhs = s.dim_s4 + 6 * (c.E - c.E0) - sigma_b;
    s.hypothesis = c.E0 + 3 * c.V0 + sigma >= c.E - c.E0;
    s.identity_applies = K == 0 && s.hypothesis && c.simply_connected();
    s.identity_holds = s.identity_lhs == s.strang;
    if (!c.simply_connected()) s.caveat = "mesh is not simply connected";
    else if (!s.hypothesis) s.caveat = "E0 + 3V0 + sigma < E - E0; the dimension formula is clamped";
    else if (K != 0) s.caveat = "K > 0; the Strang identity does not apply";
    return s;
}

NullityCheck nullity_crosscheck(const RankResult& r, const SplineDims& s) {
    NullityCheck n;
    n.nullity = r.nullity;
    n.predicted = s.dim_s4;
    n.ok = n.nullity == n.predicted;
    return n;
}

Vector velocity_coefficients(const MeshTopology& topo, const DofMap& dm, const PatchField& f) {
    Vector c = Vector::Zero(dm.n_velocity);
    const auto& nodes = poly::cubic_nodes();
    for (const auto& [t, piece] : f.pieces) {
        const auto ln = dm.local_nodes(topo, t);
        for (int n = 0; n < 10; ++n) {
            if (ln[n] < 0) continue;
            const Vec2 v = poly::eval(piece, nodes[n]);
            c[DofMap::velocity_dof(ln[n], 0)] = v.x();
            c[DofMap::velocity_dof(ln[n], 1)] = v.y();
        }
    }
    return c;
}

double range_inclusion_residual(const Matrix& B, const Matrix& M, const Matrix& C) {
    if (B.cols() == 0) return 0.0;
    const Matrix D = M.ldlt().solve(B);
    const double dmax = D.cwiseAbs().maxCoeff();
    if (dmax == 0.0) return 0.0;
    double res = 0.0;
    for (int i = 0; i < C.rows(); ++i) {
        const double w = C.row(i).cwiseAbs().sum();
        res = std::max(res, (C.row(i) * D).cwiseAbs().maxCoeff() / (w * dmax));
    }
    return res;
}

DivergenceAnalysis analyze_divergence(const MeshTopology& topo, const MeshClassification& mc,
                                      const SolverOptions& opt) {
    DivergenceAnalysis out;
    const DofMap dm = number_dofs(topo);
    out.n_velocity = dm.n_velocity;
    out.n_pressure = dm.n_pressure;
    if (dm.n_velocity > opt.max_velocity_dofs) {
        throw InputError("mesh has " + std::to_string(dm.n_velocity) + " velocity DOFs, above the dense limit " +
                         std::to_string(opt.max_velocity_dofs));
    }
    const Matrix B = assemble_divergence(topo, dm);
    const Matrix C = pressure_constraints(topo, mc, dm);
    out.rank = divergence_rank(B, topo, mc.sigma, opt.tol_rank);
    out.spline = strang_dimensions(topo.counts(), mc.sigma_i, mc.sigma_b, out.rank.K);
    out.nullity = nullity_crosscheck(out.rank, out.spline);
    const Norms nm = assemble_norms(topo, dm, opt.seminorm);
    out.range_residual = range_inclusion_residual(B, nm.M, C);
    const Matrix Qb = constrained_basis(C);
    if (opt.infsup) {
        out.infsup = infsup_constant(nm.A, B, nm.M, Qb, opt.tol_zero);
        out.has_infsup = true;
    }
    out.modes = spurious_modes(B, nm.M, Qb, opt.tol_rank);
    if (out.modes.cols() > 0) {
        out.mode_alternation = alternation_fraction(topo, pressure_vertex_values(topo, out.modes.col(0)));
    }
    return out;
}

void write_matrix_market(std::ostream& os, const Matrix& m, double drop) {
    int nnz = 0;
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > drop) ++nnz;
        }
    }
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    os.precision(17);
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > drop) os << i + 1 << ' ' << j + 1 << ' ' << m(i, j) << '\n';
        }
    }
}

}  // namespace svstokes
