#include "epadm/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "epadm/diagnostics.hpp"
#include "epadm/errors.hpp"
#include "epadm/snapshot.hpp"

namespace epadm {

namespace {

std::vector<MaterialLoop> build_loops(const Scenario& s) {
    std::vector<MaterialLoop> loops;
    if (s.grid.dim() < 2) return loops;
    for (const LoopSpec& spec : s.loops) {
        loops.push_back(MaterialLoop::circle(spec.name, spec.center,
                                             spec.radius, spec.markers));
    }
    return loops;
}

std::string snap_name(const std::string& dir, const std::string& field,
                      int index) {
    std::ostringstream os;
    os << dir << "/" << field << "_" << std::setw(5) << std::setfill('0')
       << index << ".snap";
    return os.str();
}

void write_csv_header(std::ofstream& csv,
                      const std::vector<MaterialLoop>& loops) {
    csv << "t,mass";
    for (const auto& loop : loops) csv << ",circ_" << loop.name;
    csv << ",ham_res_L2,mom_res_L2\n";
}

void write_csv_row(std::ofstream& csv, double t, const ConservedReport& rep) {
    csv << std::setprecision(17) << t << "," << rep.mass;
    for (const auto& [name, circ] : rep.circulations) {
        (void)name;
        csv << "," << circ;
    }
    csv << "," << rep.hamiltonian_residual_l2 << ","
        << rep.momentum_residual_l2 << "\n";
}

// Inertial-frame view of a moving state, used for the residual columns.
ConservedReport moving_report(const MovingFrameState& state,
                              const FrameMotion& frame,
                              const AdmBackground& bg, const Eos& eos,
                              const std::vector<MaterialLoop>& loops) {
    ConservedReport rep;
    rep.mass = integrate(state.J0_tilde);
    for (const auto& loop : loops) {
        rep.circulations.emplace_back(
            loop.name, circulation_moving(loop, state, frame, bg, eos));
    }
    if (bg.has_curvature_data()) {
        auto [u_hat, j0_hat] = hat_transform(state, frame, bg, eos);
        const Grid& g = u_hat.grid();
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            const Vec3 o = frame.velocity(g.node_point(n), state.t);
            for (int a = 0; a < g.dim(); ++a) u_hat(n, a) += o[a];
        }
        const ConstraintResiduals res =
            constraint_residuals(EulerianFluid(u_hat, j0_hat), bg, eos);
        rep.hamiltonian_residual_l2 = l2_norm(res.hamiltonian);
        rep.momentum_residual_l2 = l2_norm(res.momentum);
    }
    return rep;
}

}  // namespace

RunSummary run_simulation(const RunConfig& cfg, std::ostream* log) {
    const Scenario scenario = cfg.build_scenario();
    validate_background(scenario.bg, scenario.grid);

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir + "/diagnostics.csv");
    if (!csv) throw ConfigError("cannot write to output directory " + cfg.out_dir);

    const DynamicsOptions opts{cfg.hyperdissipation, cfg.nu};
    std::vector<MaterialLoop> loops = build_loops(scenario);

    RunSummary summary;
    summary.scenario = scenario.name;
    summary.twin = (scenario.name == "moving_frame_twin");
    summary.moving = !scenario.frame.is_identity && !summary.twin;

    FluidState state = scenario.initial_state();
    const double dt0 = cfl_dt(state, scenario.bg, scenario.eos, scenario.safety);
    const int n_steps = std::max(1, static_cast<int>(std::ceil(scenario.t_end / dt0)));
    const double dt = scenario.t_end / n_steps;
    summary.dt = dt;

    write_csv_header(csv, loops);

    const auto emit_snapshots = [&](int index, const Field& j0, const Field& m,
                                    const Field& u) {
        if (!cfg.write_snapshots) return;
        for (const std::string& f : cfg.output_fields) {
            if (f == "J0") {
                write_snapshot(snap_name(cfg.out_dir, "J0", index), "J0", j0);
            } else if (f == "m") {
                write_snapshot(snap_name(cfg.out_dir, "m", index), "m", m);
            } else if (f == "u") {
                write_snapshot(snap_name(cfg.out_dir, "u", index), "u", u);
            } else {
                throw ConfigError("unknown output field '" + f + "'");
            }
        }
    };

    std::vector<double> circ_initial;
    std::vector<double> circ_scale;

    if (summary.moving) {
        MovingFrameState mstate = scenario.initial_moving_state();
        ConservedReport rep0 = moving_report(mstate, scenario.frame,
                                             scenario.bg, scenario.eos, loops);
        summary.mass_initial = rep0.mass;
        for (const auto& [name, c] : rep0.circulations) {
            (void)name;
            circ_initial.push_back(c);
        }
        for (const auto& loop : loops) {
            circ_scale.push_back(circulation_abs_scale(loop, mstate));
        }
        write_csv_row(csv, mstate.t, rep0);
        {
            const Field u0 = moving_velocity_recovery(mstate, scenario.frame,
                                                      scenario.bg, scenario.eos);
            emit_snapshots(0, mstate.J0_tilde, mstate.m_tilde, u0);
        }
        int out_index = 1;
        for (int step = 1; step <= n_steps; ++step) {
            StageVelocities stages;
            mstate = moving_rk4_step(mstate, scenario.frame, scenario.bg,
                                     scenario.eos, dt, opts, &stages);
            for (auto& loop : loops) {
                loop = advect_loop(loop, stages, dt);
                loop.remark_if_needed();
            }
            if (step % cfg.cadence == 0 || step == n_steps) {
                const ConservedReport rep = moving_report(
                    mstate, scenario.frame, scenario.bg, scenario.eos, loops);
                write_csv_row(csv, mstate.t, rep);
                const Field u = moving_velocity_recovery(
                    mstate, scenario.frame, scenario.bg, scenario.eos);
                emit_snapshots(out_index++, mstate.J0_tilde, mstate.m_tilde, u);
                summary.mass_final = rep.mass;
                summary.t_final = mstate.t;
                summary.steps = step;
                for (std::size_t i = 0; i < loops.size(); ++i) {
                    circ_scale[i] = std::max(
                        circ_scale[i], circulation_abs_scale(loops[i], mstate));
                }
                if (step == n_steps) {
                    for (std::size_t i = 0; i < rep.circulations.size(); ++i) {
                        const double drift =
                            std::abs(rep.circulations[i].second - circ_initial[i]) /
                            std::max(std::abs(circ_initial[i]), circ_scale[i]);
                        summary.circulation_drift.emplace_back(
                            rep.circulations[i].first, drift);
                    }
                }
            }
        }
    } else {
        // Inertial run; twin mode evolves the perceived description
        // alongside and compares at each output time.
        MovingFrameState mstate = summary.twin
                                      ? scenario.initial_moving_state()
                                      : MovingFrameState(state.m, state.J0, 0.0, 0.0);
        ConservedReport rep0 =
            conserved_report(state, scenario.bg, scenario.eos, loops);
        summary.mass_initial = rep0.mass;
        for (const auto& [name, c] : rep0.circulations) {
            (void)name;
            circ_initial.push_back(c);
        }
        for (const auto& loop : loops) {
            circ_scale.push_back(circulation_abs_scale(loop, state));
        }
        write_csv_row(csv, state.t, rep0);
        {
            const Field u0 = velocity_recovery(state, scenario.bg, scenario.eos);
            emit_snapshots(0, state.J0, state.m, u0);
        }
        int out_index = 1;
        for (int step = 1; step <= n_steps; ++step) {
            StageVelocities stages;
            state = rk4_step(state, scenario.bg, scenario.eos, dt, opts, &stages);
            if (summary.twin) {
                mstate = moving_rk4_step(mstate, scenario.frame, scenario.bg,
                                         scenario.eos, dt, opts);
            }
            for (auto& loop : loops) {
                loop = advect_loop(loop, stages, dt);
                loop.remark_if_needed();
            }
            if (step % cfg.cadence == 0 || step == n_steps) {
                const ConservedReport rep =
                    conserved_report(state, scenario.bg, scenario.eos, loops);
                write_csv_row(csv, state.t, rep);
                const Field u =
                    velocity_recovery(state, scenario.bg, scenario.eos);
                emit_snapshots(out_index++, state.J0, state.m, u);
                if (summary.twin) {
                    const FrameCompareReport cmp = frame_equivalence_check(
                        state, mstate, scenario.frame, scenario.bg,
                        scenario.eos);
                    summary.frame_max_du =
                        std::max(summary.frame_max_du, cmp.max_du);
                    summary.frame_max_dJ0 =
                        std::max(summary.frame_max_dJ0, cmp.max_dJ0);
                    if (log != nullptr) {
                        *log << "frame compare t=" << state.t
                             << " max|du|=" << cmp.max_du
                             << " max|dJ0|=" << cmp.max_dJ0 << "\n";
                    }
                }
                summary.mass_final = rep.mass;
                summary.t_final = state.t;
                summary.steps = step;
                for (std::size_t i = 0; i < loops.size(); ++i) {
                    circ_scale[i] = std::max(
                        circ_scale[i], circulation_abs_scale(loops[i], state));
                }
                if (step == n_steps) {
                    for (std::size_t i = 0; i < rep.circulations.size(); ++i) {
                        const double drift =
                            std::abs(rep.circulations[i].second - circ_initial[i]) /
                            std::max(std::abs(circ_initial[i]), circ_scale[i]);
                        summary.circulation_drift.emplace_back(
                            rep.circulations[i].first, drift);
                    }
                }
            }
        }
    }

    summary.mass_drift_rel =
        std::abs(summary.mass_final - summary.mass_initial) /
        std::max(std::abs(summary.mass_initial), 1e-300);

    std::ofstream sum(cfg.out_dir + "/summary.txt");
    sum << std::setprecision(17);
    sum << "scenario " << summary.scenario << "\n";
    sum << "steps " << summary.steps << "\n";
    sum << "dt " << summary.dt << "\n";
    sum << "t_final " << summary.t_final << "\n";
    sum << "mass_initial " << summary.mass_initial << "\n";
    sum << "mass_final " << summary.mass_final << "\n";
    sum << "mass_drift_rel " << summary.mass_drift_rel << "\n";
    for (const auto& [name, drift] : summary.circulation_drift) {
        sum << "circ_drift_" << name << " " << drift << "\n";
    }
    if (summary.twin) {
        sum << "frame_max_du " << summary.frame_max_du << "\n";
        sum << "frame_max_dJ0 " << summary.frame_max_dJ0 << "\n";
    }

    if (log != nullptr) {
        *log << "run " << summary.scenario << ": " << summary.steps
             << " steps, dt=" << summary.dt
             << ", mass drift=" << summary.mass_drift_rel << "\n";
    }
    return summary;
}

}  // namespace epadm
