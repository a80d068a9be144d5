// Command-line front end: scene loading, deterministic seeding, and one
// subcommand per experiment. Reports are JSON, trajectories and curve
// polylines are CSV. Exit codes: 0 ok, 1 check failure, 2 input error,
// 3 singular/horizon abort.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lgas/recurrence.hpp"
#include "lgas/report.hpp"
#include "lgas/scene_json.hpp"
#include "lgas/singularity.hpp"
#include "lgas/verify.hpp"

namespace {

using namespace lgas;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct CommonArgs {
    std::string scene_path;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    long samples = 10000;
    long steps = 1000;
    int threads = 1;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError("cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ScattererId parse_id_or_throw(const std::string& text) {
    auto id = parse_scatterer_id(text);
    if (!id) throw SceneError("bad scatterer id: " + text);
    return *id;
}

TargetSet parse_target(const std::string& text) {
    TargetSet t;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.rfind("motif:", 0) == 0)
            t.motif_classes.push_back(static_cast<std::int32_t>(std::stol(tok.substr(6))));
        else
            t.ids.push_back(parse_id_or_throw(tok));
    }
    std::sort(t.ids.begin(), t.ids.end());
    if (t.ids.empty() && t.motif_classes.empty()) throw SceneError("empty target list");
    return t;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

Json ci_json(const BinomialCI& ci) {
    Json j;
    j["estimate"] = ci.estimate;
    j["lo"] = ci.lo;
    j["hi"] = ci.hi;
    j["successes"] = ci.successes;
    j["trials"] = ci.trials;
    return j;
}

PhasePoint resolve_start(const GasConfig& cfg, const std::string& start_id, double start_r,
                         double start_phi, std::uint64_t seed) {
    if (!start_id.empty()) {
        PhasePoint x{parse_id_or_throw(start_id), start_r, start_phi};
        if (!cfg.exists(x.alpha)) throw SceneError("start scatterer does not exist: " + start_id);
        if (!(x.phi > 0.0 && x.phi < kPi)) throw SceneError("start phi must lie in (0, pi)");
        x.r = wrap_arclength(cfg.disk(x.alpha), x.r);
        return x;
    }
    const auto ids = cfg.materialize(cfg.origin(), 4.0 * cfg.cell_size());
    if (ids.empty()) throw SceneError("no scatterers near the origin to start from");
    Rng rng = Rng::stream(seed, 0x57a67, 0);
    return measure_sample_one(cfg, ids, rng);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-dimensional Lorentz gas simulator and verification toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string target_text, alpha_text, observable_text = "f1", policy_text = "jitter";
    std::string eps_schedule_text, eps_list_text = "0.005,0.01,0.02,0.04", radius_grid_text;
    std::string start_id;
    double start_r = 0.0, start_phi = kPi / 2.0;
    double annulus_width = 0.0, region_radius = 0.0, epsilon = 0.0;
    long n_returns = 1000, cap = 20000;
    int rounds = -1, n_max = 8, resolution = 2048;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scene", common.scene_path, "scene JSON file")->required();
        cmd->add_option("--seed", common.seed, "master seed");
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--samples", common.samples, "Monte Carlo sample count");
        cmd->add_option("--steps", common.steps, "orbit step budget");
        cmd->add_option("--threads", common.threads, "worker threads");
        return cmd;
    };

    auto* c_verify = add_common(app.add_subcommand("verify", "run the full invariant suite"));
    auto* c_sim = add_common(app.add_subcommand("simulate", "export one orbit as CSV"));
    c_sim->add_option("--start-id", start_id, "starting scatterer id");
    c_sim->add_option("--start-r", start_r, "starting arclength");
    c_sim->add_option("--start-phi", start_phi, "starting angle in (0, pi)");
    auto* c_lyap = add_common(app.add_subcommand("lyapunov", "tangent-map expansion estimates"));
    auto* c_sing =
        add_common(app.add_subcommand("singularities", "curve export and eps-tube estimates"));
    c_sing->add_option("--alpha", alpha_text, "scatterer id (default: nearest the origin)");
    c_sing->add_option("--eps-list", eps_list_text, "comma-separated eps values");
    c_sing->add_option("--resolution", resolution, "curve samples per boundary length");
    auto* c_hor = add_common(app.add_subcommand("horizon", "free-path statistics, corridor scan"));
    c_hor->add_option("--region", region_radius, "sampling region radius");
    auto* c_nb = add_common(app.add_subcommand("neighbors", "geometric vs dynamical neighbor sets"));
    c_nb->add_option("--alpha", alpha_text, "scatterer id");
    c_nb->add_option("--n-max", n_max, "largest step count");
    auto* c_rec = add_common(app.add_subcommand("recur", "recurrence fractions at checkpoints"));
    c_rec->add_option("--target", target_text, "target scatterers (ids or motif:k)")->required();
    c_rec->add_option("--radius-grid", radius_grid_text, "radii for A(R) membership estimates");
    c_rec->add_option("--epsilon", epsilon, "certify an R with complement below this epsilon");
    auto* c_birk = add_common(app.add_subcommand("birkhoff", "forward/backward return averages"));
    c_birk->add_option("--target", target_text, "target scatterers (ids or motif:k)")->required();
    c_birk->add_option("--observable", observable_text, "one|f1|f2|f3");
    c_birk->add_option("--returns", n_returns, "number of returns to average over");
    c_birk->add_option("--start-id", start_id, "starting scatterer id");
    c_birk->add_option("--start-r", start_r, "starting arclength");
    c_birk->add_option("--start-phi", start_phi, "starting angle in (0, pi)");
    auto* c_build =
        add_common(app.add_subcommand("build-aperiodic", "annulus-rewrite construction"));
    c_build->add_option("--alpha", alpha_text, "cross-section scatterer id");
    c_build->add_option("--target", target_text, "return target (default: the alpha scatterer)");
    c_build->add_option("--eps-schedule", eps_schedule_text, "decreasing eps values per round");
    c_build->add_option("--annulus-width", annulus_width, "rewrite annulus width (default 3*tau_M)");
    c_build->add_option("--rounds", rounds, "number of rounds (default: schedule length)");
    c_build->add_option("--policy", policy_text, "jitter|identity");
    c_build->add_option("--cap", cap, "first-return step cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string scene_text = read_file(common.scene_path);
        GasConfig cfg = parse_scene(scene_text);
        fs::create_directories(common.out_dir);
        auto out_path = [&](const std::string& name) {
            return (fs::path(common.out_dir) / name).string();
        };

        auto default_alpha = [&]() -> ScattererId {
            if (!alpha_text.empty()) return parse_id_or_throw(alpha_text);
            const auto ids = cfg.materialize(cfg.origin(), 4.0 * cfg.cell_size());
            if (ids.empty()) throw SceneError("no scatterer near the origin; pass --alpha");
            return ids.front();
        };

        if (*c_verify) {
            VerifyOptions vo;
            vo.samples = common.samples;
            vo.seed = common.seed;
            vo.threads = common.threads;
            const VerifyReport rep = run_verify(cfg, vo);
            Json params;
            params["samples"] = common.samples;
            Json doc = make_report("verify", common.seed, scene_text, params);
            doc["results"]["checks"] = rep.to_json();
            doc["results"]["pass"] = rep.pass();
            write_text_file(out_path("verify.json"), doc.dump(2) + "\n");
            for (const auto& c : rep.checks)
                std::fprintf(stderr, "%-40s %s (samples %ld, failures %ld)\n", c.name.c_str(),
                             c.pass ? "pass" : "FAIL", c.samples, c.failures);
            return rep.pass() ? 0 : 1;
        }

        if (*c_sim) {
            PhasePoint x = resolve_start(cfg, start_id, start_r, start_phi, common.seed);
            std::vector<TrajectoryRow> rows;
            StepStatus last = StepStatus::ok;
            for (long k = 0; k < common.steps; ++k) {
                const StepResult s = billiard_map(cfg, x);
                TrajectoryRow row;
                row.step = k;
                row.alpha = x.alpha;
                row.r = x.r;
                row.phi = x.phi;
                const Vec2 q = frame_at(cfg.disk(x.alpha), x.r).position;
                row.x = q.x;
                row.y = q.y;
                if (s.status == StepStatus::horizon) {
                    last = s.status;
                    rows.push_back(row);
                    break;
                }
                row.tau = s.step.tau;
                row.grazing_margin = s.step.grazing_margin;
                rows.push_back(row);
                if (s.status == StepStatus::singular) {
                    last = s.status;
                    break;
                }
                x = s.step.next;
            }
            write_text_file(out_path("trajectory.csv"), trajectory_csv(rows));
            if (last != StepStatus::ok) {
                std::fprintf(stderr, "orbit aborted after %zu steps (%s)\n", rows.size(),
                             last == StepStatus::singular ? "near-tangent collision"
                                                          : "horizon exceeded");
                return 3;
            }
            return 0;
        }

        if (*c_lyap) {
            const auto ids = cfg.materialize(cfg.origin(), 4.0 * cfg.cell_size());
            Json runs = Json::array();
            RunningStats stats;
            long truncated = 0;
            for (long i = 0; i < common.samples; ++i) {
                Rng rng = Rng::stream(common.seed, 0x17a9, static_cast<std::uint64_t>(i));
                const PhasePoint x0 = measure_sample_one(cfg, ids, rng);
                const LyapunovEstimate est = lyapunov_estimate(cfg, x0, common.steps, rng);
                Json j;
                j["estimate"] = est.value;
                j["steps_completed"] = est.steps_completed;
                runs.push_back(j);
                if (est.steps_completed < common.steps) ++truncated;
                if (est.steps_completed > 0) stats.add(est.value);
            }
            Json params;
            params["samples"] = common.samples;
            params["steps"] = common.steps;
            Json doc = make_report("lyapunov", common.seed, scene_text, params);
            doc["results"]["mean"] = stats.mean;
            doc["results"]["sd"] = stats.sd();
            doc["results"]["log_lambda"] = std::log(cfg.expansion_constant());
            doc["results"]["truncated_orbits"] = truncated;
            doc["results"]["runs"] = runs;
            write_text_file(out_path("lyapunov.json"), doc.dump(2) + "\n");
            return stats.n > 0 ? 0 : 3;
        }

        if (*c_sing) {
            const ScattererId alpha = default_alpha();
            SingularityAtlas atlas(cfg, resolution);
            std::vector<CurveCsvRow> rows;
            long index = 0;
            for (CurveKind kind : {CurveKind::sigma_plus, CurveKind::sigma_minus}) {
                for (const auto& c : singularity_curves(cfg, alpha, kind, resolution)) {
                    for (const auto& p : c.samples) {
                        CurveCsvRow row;
                        row.alpha = to_string(c.base);
                        row.kind = kind == CurveKind::sigma_plus ? "sigma+" : "sigma-";
                        row.beta = to_string(c.neighbor);
                        row.branch = c.branch == TangentBranch::left ? "left" : "right";
                        row.curve_index = index;
                        row.r = p.r;
                        row.phi = p.phi;
                        rows.push_back(row);
                    }
                    ++index;
                }
            }
            write_text_file(out_path("curves.csv"), curves_csv(rows));

            Json tubes = Json::array();
            for (double eps : parse_double_list(eps_list_text)) {
                const TubeEstimate t = eps_tube_measure(atlas, alpha, eps, common.samples,
                                                        common.seed, common.threads);
                Json j;
                j["eps"] = eps;
                j["fraction"] = ci_json(t.fraction);
                j["ratio_to_eps"] = eps > 0 ? t.fraction.estimate / eps : 0.0;
                tubes.push_back(j);
            }
            Json params;
            params["alpha"] = to_string(alpha);
            params["resolution"] = resolution;
            params["samples"] = common.samples;
            Json doc = make_report("singularities", common.seed, scene_text, params);
            doc["results"]["curves"] = index;
            doc["results"]["eps_tubes"] = tubes;
            write_text_file(out_path("singularities.json"), doc.dump(2) + "\n");
            return 0;
        }

        if (*c_hor) {
            const double region = region_radius > 0 ? region_radius : 10.0 * cfg.cell_size();
            const HorizonReport rep = cfg.estimate_horizon(region, common.samples, common.seed);
            Json params;
            params["region"] = region;
            params["samples"] = common.samples;
            Json doc = make_report("horizon", common.seed, scene_text, params);
            doc["results"]["tau_min_observed"] = rep.tau_min_observed;
            doc["results"]["tau_max_observed"] = rep.tau_max_observed;
            doc["results"]["corridor_found"] = rep.corridor_found;
            doc["results"]["samples"] = rep.samples;
            doc["results"]["escapes"] = rep.escapes;
            write_text_file(out_path("horizon.json"), doc.dump(2) + "\n");
            return 0;
        }

        if (*c_nb) {
            const ScattererId alpha = default_alpha();
            const auto dyn =
                dynamical_neighbor_profile(cfg, alpha, n_max, common.samples, common.seed);
            Json per_n = Json::array();
            std::vector<double> xs, ys;
            bool contained = true;
            for (int k = 1; k <= n_max; ++k) {
                const auto geo = neighbor_set(cfg, alpha, k, NeighborMethod::geometric);
                const auto& d = dyn[static_cast<std::size_t>(k - 1)];
                const bool inc =
                    std::includes(geo.ids.begin(), geo.ids.end(), d.ids.begin(), d.ids.end());
                contained = contained && inc;
                xs.push_back(k);
                ys.push_back(static_cast<double>(geo.ids.size()));
                Json j;
                j["n"] = k;
                j["geometric"] = geo.ids.size();
                j["dynamical"] = d.ids.size();
                j["contained"] = inc;
                per_n.push_back(j);
            }
            const QuadraticFit fit = fit_quadratic(xs, ys);
            Json params;
            params["alpha"] = to_string(alpha);
            params["n_max"] = n_max;
            params["samples"] = common.samples;
            Json doc = make_report("neighbors", common.seed, scene_text, params);
            doc["results"]["per_n"] = per_n;
            doc["results"]["quadratic_fit"] = {{"a", fit.a},
                                               {"b", fit.b},
                                               {"c", fit.c},
                                               {"relative_residual", fit.relative_residual}};
            doc["results"]["dynamical_contained"] = contained;
            write_text_file(out_path("neighbors.json"), doc.dump(2) + "\n");
            return contained ? 0 : 1;
        }

        if (*c_rec) {
            const TargetSet target = parse_target(target_text);
            const RecurrenceFractions rf = recurrence_fraction(
                cfg, target, common.steps, common.samples, common.seed, common.threads);
            Json fracs = Json::array();
            for (std::size_t i = 0; i < rf.checkpoints.size(); ++i) {
                Json j;
                j["steps"] = rf.checkpoints[i];
                j["fraction"] = ci_json(rf.fractions[i]);
                fracs.push_back(j);
            }
            Json params;
            params["target"] = target_text;
            params["steps"] = common.steps;
            params["samples"] = common.samples;
            Json doc = make_report("recur", common.seed, scene_text, params);
            doc["results"]["checkpoints"] = fracs;
            doc["results"]["singular"] = rf.singular;
            doc["results"]["horizon"] = rf.horizon;
            if (!radius_grid_text.empty()) {
                const ScattererId alpha = target.sampling_ids().front();
                Json a_of_r = Json::array();
                for (double R : parse_double_list(radius_grid_text)) {
                    const auto est =
                        estimate_A_measure(cfg, alpha, target, R, common.samples, common.steps,
                                           common.seed, common.threads);
                    Json j;
                    j["R"] = R;
                    j["membership"] = ci_json(est.membership);
                    j["complement"] = ci_json(est.complement);
                    a_of_r.push_back(j);
                }
                doc["results"]["a_measure"] = a_of_r;
            }
            if (epsilon > 0.0) {
                const ScattererId alpha = target.sampling_ids().front();
                const ChooseRResult cr = choose_R(cfg, alpha, target, epsilon, common.samples,
                                                  common.steps, common.seed);
                Json j;
                j["ok"] = cr.ok;
                j["R"] = cr.R;
                j["doublings"] = cr.doublings;
                j["complement"] = ci_json(cr.final_estimate.complement);
                if (!cr.diagnostic.empty()) j["diagnostic"] = cr.diagnostic;
                doc["results"]["choose_R"] = j;
            }
            write_text_file(out_path("recur.json"), doc.dump(2) + "\n");
            return 0;
        }

        if (*c_birk) {
            const TargetSet target = parse_target(target_text);
            Observable f = Observable::sin_phi;
            if (observable_text == "one")
                f = Observable::constant_one;
            else if (observable_text == "f1")
                f = Observable::sin_phi;
            else if (observable_text == "f2")
                f = Observable::cos_r;
            else if (observable_text == "f3")
                f = Observable::next_tau;
            else
                throw SceneError("unknown observable: " + observable_text);
            const PhasePoint x0 = resolve_start(cfg, start_id, start_r, start_phi, common.seed);
            const BirkhoffResult res = birkhoff_average(cfg, target, f, x0, n_returns);
            Json params;
            params["target"] = target_text;
            params["observable"] = observable_text;
            params["returns"] = n_returns;
            Json doc = make_report("birkhoff", common.seed, scene_text, params);
            doc["results"]["forward"] = res.forward;
            doc["results"]["backward"] = res.backward;
            doc["results"]["forward_count"] = res.forward_count;
            doc["results"]["backward_count"] = res.backward_count;
            doc["results"]["forward_sem"] = res.forward_sem;
            doc["results"]["backward_sem"] = res.backward_sem;
            doc["results"]["truncated"] = res.truncated;
            write_text_file(out_path("birkhoff.json"), doc.dump(2) + "\n");
            return res.truncated ? 3 : 0;
        }

        if (*c_build) {
            const ScattererId alpha = default_alpha();
            const TargetSet target =
                target_text.empty() ? TargetSet::single(alpha) : parse_target(target_text);
            BuildOptions opts;
            if (!eps_schedule_text.empty()) {
                opts.eps_schedule = parse_double_list(eps_schedule_text);
            } else {
                const int k_rounds = rounds > 0 ? rounds : 2;
                for (int k = 0; k < k_rounds; ++k)
                    opts.eps_schedule.push_back(0.3 * std::pow(2.0, -k));
            }
            if (rounds >= 0 && rounds < static_cast<int>(opts.eps_schedule.size()))
                opts.eps_schedule.resize(static_cast<std::size_t>(rounds));
            opts.annulus_width = annulus_width;
            opts.samples_per_round = common.samples;
            opts.return_cap = cap;
            const ModificationPolicy policy =
                policy_text == "identity" ? identity_policy() : jitter_policy();
            const BuildResult res = build_aperiodic(cfg, alpha, target, opts, policy, common.seed);

            Json rounds_json = Json::array();
            for (const auto& r : res.log.rounds) {
                Json j;
                j["k"] = r.k;
                j["R"] = r.R;
                j["eps"] = r.eps;
                j["complement_estimate"] = r.complement_estimate;
                j["complement_hi"] = r.complement_hi;
                j["annulus"] = {r.annulus_inner, r.annulus_outer};
                j["removed"] = r.removed_count;
                j["added"] = r.added_count;
                j["local_horizon_ok"] = r.local_horizon_ok;
                rounds_json.push_back(j);
            }
            Json params;
            params["alpha"] = to_string(alpha);
            params["eps_schedule"] = opts.eps_schedule;
            params["policy"] = policy_text;
            params["samples"] = common.samples;
            params["cap"] = cap;
            Json doc = make_report("build-aperiodic", common.seed, scene_text, params);
            doc["results"]["rounds"] = rounds_json;
            doc["results"]["completed"] = res.log.completed;
            if (!res.log.failure.empty()) doc["results"]["failure"] = res.log.failure;
            write_text_file(out_path("build_log.json"), doc.dump(2) + "\n");
            write_text_file(out_path("scene_out.json"), scene_to_json(res.config));
            return res.log.completed ? 0 : 1;
        }

        return 2;
    } catch (const SceneError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
