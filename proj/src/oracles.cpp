#include "cvmem/oracles.hpp"

#include <cmath>
#include <numbers>

namespace cvmem {

namespace {

Eigen::MatrixXcd exp_of_hermitian(const Eigen::MatrixXd& h, double angle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  Eigen::VectorXcd phases(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    phases(k) = std::exp(Complex(0, -angle * ev(k)));
  }
  const Eigen::MatrixXcd v = solver.eigenvectors().cast<Complex>();
  return v * phases.asDiagonal() * v.adjoint();
}

// One-cavity propagator lifted to mediator x mode_a x mode_b. act_on_a
// selects which mode couples; the other is spectator.
Eigen::MatrixXcd lift_two_level(const Eigen::MatrixXcd& u1, int levels,
                                int modes, bool act_on_a) {
  const int dim = levels * modes * modes;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int q = 0; q < levels; ++q) {
    for (int qp = 0; qp < levels; ++qp) {
      for (int n = 0; n < modes; ++n) {
        for (int np = 0; np < modes; ++np) {
          const Complex u = u1(q * modes + n, qp * modes + np);
          if (u == Complex(0)) continue;
          for (int spec = 0; spec < modes; ++spec) {
            if (act_on_a) {
              out((q * modes + n) * modes + spec,
                  (qp * modes + np) * modes + spec) += u;
            } else {
              out((q * modes + spec) * modes + n,
                  (qp * modes + spec) * modes + np) += u;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd exp_oracle(double tau, int n_cut) {
  if (n_cut < 1 || n_cut > 64) {
    throw std::invalid_argument("exp_oracle: n_cut must lie in [1, 64]");
  }
  const int m = n_cut + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int n = 0; n + 1 < m; ++n) {
    const double g = std::sqrt(static_cast<double>(n + 1));
    h(0 * m + n, 1 * m + n + 1) = g;  // <e,n|H|g,n+1>
    h(1 * m + n + 1, 0 * m + n) = g;
  }
  return exp_of_hermitian(h, std::numbers::pi * tau);
}

Eigen::MatrixXcd vee_exp_oracle(double tau, int n_cut) {
  if (n_cut < 1 || n_cut > 16) {
    throw std::invalid_argument("vee_exp_oracle: n_cut must lie in [1, 16]");
  }
  const int m = n_cut + 1;
  const int dim = 3 * m * m;
  auto idx = [m](int level, int n, int mm) { return (level * m + n) * m + mm; };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < m; ++n) {
    for (int mm = 0; mm < m; ++mm) {
      if (n >= 1) {
        const double g = std::sqrt(static_cast<double>(n));
        h(idx(0, n - 1, mm), idx(2, n, mm)) = g;  // <e_a,n-1,m|H|g,n,m>
        h(idx(2, n, mm), idx(0, n - 1, mm)) = g;
      }
      if (mm >= 1) {
        const double g = std::sqrt(static_cast<double>(mm));
        h(idx(1, n, mm - 1), idx(2, n, mm)) = g;  // <e_b,n,m-1|H|g,n,m>
        h(idx(2, n, mm), idx(1, n, mm - 1)) = g;
      }
    }
  }
  return exp_of_hermitian(h, std::numbers::pi * tau);
}

Eigen::MatrixXcd dense_jc_assembly(const JcBlocks& blocks) {
  const int m = blocks.u11.dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  out.block(0, 0, m, m) = to_dense(blocks.u11);
  out.block(0, m, m, m) = to_dense(blocks.u12);
  out.block(m, 0, m, m) = to_dense(blocks.u21);
  out.block(m, m, m, m) = to_dense(blocks.u22);
  return out;
}

double jc_oracle_deviation(double tau, const TruncationPolicy& policy,
                           PhaseConvention convention) {
  const int m = policy.dim();
  const Eigen::MatrixXcd assembled =
      dense_jc_assembly(jc_blocks(tau, policy, convention));
  Eigen::MatrixXcd oracle = exp_oracle(tau, policy.n_cut + 1);
  if (convention == PhaseConvention::PlusI) {
    oracle = oracle.conjugate();  // exp(+iHt) for the swapped convention
  }
  // Restrict the padded oracle to photon levels <= n_cut. The padding keeps
  // the boundary sector {|e,n_cut>, |g,n_cut+1>} intact, so every compared
  // entry is exact; the assembly's dropped shift out of |e,n_cut> lands
  // outside the restriction.
  const int mp = m + 1;
  double dev = 0.0;
  for (int q = 0; q < 2; ++q) {
    for (int qp = 0; qp < 2; ++qp) {
      for (int n = 0; n < m; ++n) {
        for (int np = 0; np < m; ++np) {
          const Complex a = assembled(q * m + n, qp * m + np);
          const Complex b = oracle(q * mp + n, qp * mp + np);
          dev = std::max(dev, std::abs(a - b));
        }
      }
    }
  }
  return dev;
}

Eigen::MatrixXcd full_space_effective_operator(const MediatorSpec& spec,
                                               double tau_a, double tau_b,
                                               int n_cut, Outcome outcome) {
  spec.validate();
  const int m = n_cut + 2;  // one padding level per mode
  const Eigen::MatrixXcd ua =
      lift_two_level(exp_oracle(tau_a, m - 1), 2, m, true);
  const Eigen::MatrixXcd ub =
      lift_two_level(exp_oracle(tau_b, m - 1), 2, m, false);
  const Eigen::MatrixXcd full = ub * ua;

  const auto [me_e, me_g] = spec.measurement_row(outcome);
  const Complex bra[2] = {me_e, me_g};  // already a bra row
  const Complex prep[2] = {spec.c_e, spec.c_g};

  const int n = n_cut + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int q = 0; q < 2; ++q) {
    for (int qp = 0; qp < 2; ++qp) {
      const Complex w = bra[q] * prep[qp];
      if (w == Complex(0)) continue;
      for (int na = 0; na < n; ++na) {
        for (int nb = 0; nb < n; ++nb) {
          for (int nap = 0; nap < n; ++nap) {
            for (int nbp = 0; nbp < n; ++nbp) {
              out(na * n + nb, nap * n + nbp) +=
                  w * full((q * m + na) * m + nb, (qp * m + nap) * m + nbp);
            }
          }
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXcd dense_two_term(const TwoTermOperator& op) {
  const Eigen::MatrixXcd ab = to_dense(op.a_b);
  const Eigen::MatrixXcd ba = to_dense(op.b_a);
  const Eigen::MatrixXcd cb = to_dense(op.c_b);
  const Eigen::MatrixXcd da = to_dense(op.d_a);
  const int n = static_cast<int>(ab.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int na = 0; na < n; ++na) {
    for (int nap = 0; nap < n; ++nap) {
      for (int nb = 0; nb < n; ++nb) {
        for (int nbp = 0; nbp < n; ++nbp) {
          out(na * n + nb, nap * n + nbp) =
              ba(na, nap) * ab(nb, nbp) + da(na, nap) * cb(nb, nbp);
        }
      }
    }
  }
  return out;
}

double effective_operator_deviation(const MediatorSpec& spec, double tau_a,
                                    double tau_b, int n_cut, Outcome outcome) {
  const TruncationPolicy policy{n_cut, 1e-12};
  const TwoTermOperator op =
      effective_operator(spec, jc_blocks(tau_a, policy),
                         jc_blocks(tau_b, policy), outcome);
  const Eigen::MatrixXcd structured = dense_two_term(op);
  const Eigen::MatrixXcd oracle =
      full_space_effective_operator(spec, tau_a, tau_b, n_cut, outcome);
  return (structured - oracle).cwiseAbs().maxCoeff();
}

double vee_oracle_deviation(double tau, int n_cut) {
  const TruncationPolicy policy{n_cut, 1e-12};
  const VeePropagator prop = vee_propagator(tau, policy);
  const Eigen::MatrixXcd oracle = vee_exp_oracle(tau, n_cut + 1);
  const int m = n_cut + 1;
  const int mp = n_cut + 2;
  auto idx_o = [mp](int level, int n, int mm) {
    return (level * mp + n) * mp + mm;
  };
  double dev = 0.0;
  // Compare columns whose full sector survives in the truncated space:
  // inputs with photon indices <= n_cut - 1 never reach dropped slots, so
  // the strict tail policy cannot fire and every entry is exact on both
  // sides (the oracle is padded by one level to keep its sectors intact).
  for (int l1 = 0; l1 < 3; ++l1) {
    for (int n1 = 0; n1 + 1 < m; ++n1) {
      for (int m1 = 0; m1 + 1 < m; ++m1) {
        VeeState basis;
        basis.g = Eigen::MatrixXcd::Zero(m, m);
        basis.ea = Eigen::MatrixXcd::Zero(m, m);
        basis.eb = Eigen::MatrixXcd::Zero(m, m);
        (l1 == 0 ? basis.ea : l1 == 1 ? basis.eb : basis.g)(n1, m1) = 1.0;
        apply_in_place(prop, basis);
        const int col = idx_o(l1, n1, m1);
        for (int l2 = 0; l2 < 3; ++l2) {
          const Eigen::MatrixXcd& sheet =
              l2 == 0 ? basis.ea : l2 == 1 ? basis.eb : basis.g;
          for (int n2 = 0; n2 < m; ++n2) {
            for (int m2 = 0; m2 < m; ++m2) {
              dev = std::max(dev,
                             std::abs(sheet(n2, m2) -
                                      oracle(idx_o(l2, n2, m2), col)));
            }
          }
        }
      }
    }
  }
  return dev;
}

}  // namespace cvmem
