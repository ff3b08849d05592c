#include "cli.hpp"

#include "grid.hpp"
#include "output.hpp"

#include "qfric/decoherence.hpp"
#include "qfric/friction.hpp"
#include "qfric/gle.hpp"
#include "qfric/kernels.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>

namespace qfric::cli {

namespace {

struct Options {
    double g = 1.0;
    double lambda = 0.01;
    double a = 1.0;
    double v = 0.5;
    double flight_time = 1.0;
    double delta_q0 = 1.0;
    double omega0 = 0.0;
    double omega_plate = 0.0;
    double omega0_dimless = 0.0;
    double omega_plate_dimless = 0.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_subdivisions = 20000;
    double cutoff = 0.0;
    double infrared = 0.0;
    std::string output;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string branch_rule = "derivation";

    std::string v_grid = "0:0.9:91";

    std::string axis = "velocity";
    std::string grid;

    double dt = 0.05;
    std::size_t n = 256;
    std::string components = "both";
    bool sensitivity = false;

    std::string kernel_file;
    double q0 = 1.0;
    double qdot0 = 0.0;
    std::size_t members = 1;
    std::size_t samples = 10000;
    bool no_noise = false;
    bool no_dissipation = false;
    bool noise_only = false;
};

struct Given {
    CLI::Option* lambda = nullptr;
    CLI::Option* omega0 = nullptr;
    CLI::Option* omega_plate = nullptr;
    CLI::Option* omega0_dimless = nullptr;
    CLI::Option* omega_plate_dimless = nullptr;
    CLI::Option* cutoff = nullptr;
    CLI::Option* infrared = nullptr;
    CLI::Option* output = nullptr;
    CLI::Option* grid = nullptr;
};

struct Resolved {
    std::string command;
    ModelParams params;
    Tolerance tol;
    BranchRule rule = BranchRule::Derivation;
    Options opt;
};

bool is_config_error(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ParamOutOfRange:
    case ErrorKind::RegulatorTooSmall:
    case ErrorKind::InvalidKernel:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::Io:
        return true;
    default:
        return false;
    }
}

void add_model_options(CLI::App& app, Options& o, Given& given)
{
    app.add_option("--g", o.g, "Detector-field coupling")->capture_default_str();
    given.lambda = app.add_option("--lambda", o.lambda, "Plate-field coupling (default 0.01, 1e-4 for decoherence)");
    app.add_option("--a", o.a, "Height above the plate")->capture_default_str();
    app.add_option("--v", o.v, "Speed, 0 <= v < 1")->capture_default_str();
    app.add_option("--flight-time", o.flight_time, "Flight time T")->capture_default_str();
    app.add_option("--delta-q0", o.delta_q0, "Initial amplitude separation")->capture_default_str();
    given.omega0 = app.add_option("--omega0", o.omega0, "Detector frequency");
    given.omega0_dimless = app.add_option("--omega0-dimless", o.omega0_dimless, "Detector frequency times a");
    given.omega_plate = app.add_option("--omega-plate", o.omega_plate, "Plate frequency");
    given.omega_plate_dimless
        = app.add_option("--omega-plate-dimless", o.omega_plate_dimless, "Plate frequency times a");
    given.omega0->excludes(given.omega0_dimless);
    given.omega_plate->excludes(given.omega_plate_dimless);
    app.add_option("--rel-tol", o.rel_tol, "Relative quadrature tolerance")->capture_default_str();
    app.add_option("--abs-tol", o.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
    app.add_option("--max-subdivisions", o.max_subdivisions, "Adaptive subdivision budget")->capture_default_str();
    given.cutoff = app.add_option("--cutoff", o.cutoff, "Ultraviolet regulator (default 50 max(omega0, omega_plate, 1/a))");
    given.infrared
        = app.add_option("--infrared", o.infrared, "Infrared regulator (default 1e-3 min(omega0, omega_plate, 1/a))");
    given.output = app.add_option("-o,--output", o.output, "Output file (default <command>.csv or .json)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--seed", o.seed, "Base seed")->capture_default_str();
    app.add_option("--branch-rule", o.branch_rule, "Branch selection for the plate sum")
        ->check(CLI::IsMember({"derivation", "as_printed"}))
        ->capture_default_str();
}

Resolved resolve(const std::string& command, const Options& o, const Given& given)
{
    Resolved r;
    r.command = command;
    r.opt = o;
    const double default_dimless = command == "friction" ? 0.01 : 0.03;
    ModelParams& p = r.params;
    p.g = o.g;
    p.lambda = given.lambda->count() > 0 ? o.lambda : command == "decoherence" ? 1e-4 : 0.01;
    p.a = o.a;
    p.v = o.v;
    p.flight_time = o.flight_time;
    p.delta_q0 = o.delta_q0;
    if (!(o.a > 0.0) || !std::isfinite(o.a))
        throw ParamOutOfRange("a", o.a, "(0, inf)");
    p.omega0 = given.omega0->count() > 0 ? o.omega0
        : given.omega0_dimless->count() > 0 ? o.omega0_dimless / o.a
                                             : default_dimless / o.a;
    p.omega_plate = given.omega_plate->count() > 0 ? o.omega_plate
        : given.omega_plate_dimless->count() > 0   ? o.omega_plate_dimless / o.a
                                                   : default_dimless / o.a;
    validate(p);
    if (!(o.rel_tol > 0.0) || !(o.rel_tol < 1.0))
        throw ParamOutOfRange("rel_tol", o.rel_tol, "(0, 1)");
    if (!(o.abs_tol >= 0.0) || !std::isfinite(o.abs_tol))
        throw ParamOutOfRange("abs_tol", o.abs_tol, "[0, inf)");
    if (o.max_subdivisions < 1)
        throw ParamOutOfRange("max_subdivisions", 0.0, "[1, inf)");
    r.tol = {o.rel_tol, o.abs_tol, o.max_subdivisions};
    r.rule = o.branch_rule == "as_printed" ? BranchRule::AsPrinted : BranchRule::Derivation;
    const Regulator reg = default_regulator(p);
    r.opt.cutoff = given.cutoff->count() > 0 ? o.cutoff : reg.cutoff;
    r.opt.infrared = given.infrared->count() > 0 ? o.infrared : reg.infrared;
    if (given.output->count() == 0)
        r.opt.output = command + (o.format == "json" ? ".json" : ".csv");
    return r;
}

Json config_json(const Resolved& r)
{
    const Options& o = r.opt;
    const ModelParams& p = r.params;
    Json c;
    c["command"] = r.command;
    c["g"] = p.g;
    c["lambda"] = p.lambda;
    c["a"] = p.a;
    c["v"] = p.v;
    c["flight_time"] = p.flight_time;
    c["delta_q0"] = p.delta_q0;
    c["omega0"] = p.omega0;
    c["omega_plate"] = p.omega_plate;
    c["omega0_dimless"] = p.omega0_dimless();
    c["omega_plate_dimless"] = p.omega_plate_dimless();
    c["rel_tol"] = r.tol.rel;
    c["abs_tol"] = r.tol.abs;
    c["max_subdivisions"] = r.tol.max_subdivisions;
    c["cutoff"] = o.cutoff;
    c["infrared"] = o.infrared;
    c["output"] = o.output;
    c["format"] = o.format;
    c["seed"] = o.seed;
    c["branch_rule"] = o.branch_rule;
    if (r.command == "friction") {
        c["v_grid"] = o.v_grid;
    } else if (r.command == "decoherence") {
        c["axis"] = o.axis;
        c["grid"] = o.grid;
    } else {
        c["dt"] = o.dt;
        c["n"] = o.n;
        c["components"] = o.components;
    }
    if (r.command == "kernels")
        c["sensitivity"] = o.sensitivity;
    if (r.command == "gle") {
        c["kernel_file"] = o.kernel_file;
        c["q0"] = o.q0;
        c["qdot0"] = o.qdot0;
        c["members"] = o.members;
        c["samples"] = o.samples;
        c["no_noise"] = o.no_noise;
        c["no_dissipation"] = o.no_dissipation;
        c["noise_only"] = o.noise_only;
    }
    return c;
}

Regulator regulator(const Resolved& r) { return {r.opt.cutoff, r.opt.infrared}; }

int cmd_friction(const Resolved& r, std::ostream& err)
{
    if (!(r.params.g > 0.0))
        throw ParamOutOfRange("g", r.params.g, "(0, inf)");
    const std::vector<double> grid = expand(parse_grid(r.opt.v_grid, "v_grid"));
    const std::vector<FrictionPoint> curve = friction_curve(r.params, grid);
    Table t{{"v", "im_gamma_over_g2"}, {}};
    const double g2 = r.params.g * r.params.g;
    for (const FrictionPoint& pt : curve)
        t.rows.push_back({cell(pt.v), cell(pt.im_gamma / g2)});
    Json diag;
    diag["points"] = curve.size();
    emit(r.opt.output, r.opt.format, config_json(r), diag, t);
    err << "friction: " << curve.size() << " points written to " << r.opt.output << '\n';
    return kOk;
}

int cmd_decoherence(const Resolved& r, std::ostream& err)
{
    const bool velocity = r.opt.axis == "velocity";
    const std::string text = r.opt.grid.empty() ? (velocity ? "0:0.9:91" : "0.005:0.1:96") : r.opt.grid;
    Resolved rr = r;
    rr.opt.grid = text;
    const std::vector<double> grid = expand(parse_grid(text, "grid"));
    const DecoherenceSweep sweep = t_d_sweep(r.params, velocity ? SweepAxis::Velocity : SweepAxis::PlateFrequency,
                                             grid, r.tol, r.rule);
    Table t{{"x", "t_d_in_units_of_A", "branch", "im_s1", "im_s2", "status"}, {}};
    std::size_t failed = 0;
    for (const SweepPoint& pt : sweep.points) {
        if (pt.result) {
            const DecoherenceResult& d = *pt.result;
            t.rows.push_back({cell(pt.x), cell(d.t_d_over_a), d.branch ? to_string(d.branch->kind) : "none",
                              cell(d.im_s1), cell(d.im_s2), pt.status});
        } else {
            ++failed;
            t.rows.push_back({cell(pt.x), "", "", "", "", pt.status});
            err << "decoherence: x = " << cell(pt.x) << ": " << pt.message << '\n';
        }
    }
    Json diag;
    diag["global_factor_A"] = sweep.global_factor;
    diag["points"] = sweep.points.size();
    diag["failed_points"] = failed;
    if (r.params.v > 0.0 && r.params.omega_plate > 0.0) {
        try {
            const BranchJump j = branch_jump(r.params, 1e-6, r.tol);
            diag["branch_boundary"] = {{"omega_plate_dimless", j.boundary * r.params.a},
                                       {"relative_offset", j.offset},
                                       {"s_below", j.s_below},
                                       {"s_above", j.s_above},
                                       {"jump", j.jump}};
        } catch (const Error& e) {
            diag["branch_boundary"] = {{"status", to_string(e.kind())}};
        }
    }
    emit(rr.opt.output, rr.opt.format, config_json(rr), diag, t);
    err << "decoherence: " << sweep.points.size() << " points (" << failed << " flagged) written to "
        << rr.opt.output << '\n';
    return kOk;
}

Components components(const std::string& s)
{
    if (s == "free")
        return Components::Free;
    if (s == "plate")
        return Components::Plate;
    return Components::Both;
}

TimeGrid time_grid(const Options& o)
{
    if (!(o.dt > 0.0) || !std::isfinite(o.dt))
        throw ParamOutOfRange("dt", o.dt, "(0, inf)");
    if (o.n < 1)
        throw ParamOutOfRange("n", 0.0, "[1, inf)");
    return {o.dt, o.n};
}

KernelBundle kernels_or_fail(const Resolved& r)
{
    const TimeGrid grid = time_grid(r.opt);
    try {
        return compute_kernels(r.params, grid, regulator(r), components(r.opt.components), r.tol);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::KernelQuadratureFailed)
            throw;
        std::ostringstream os;
        os.precision(17);
        os << "kernel quadrature failed for tau in [0, " << grid.dt * static_cast<double>(grid.n - 1)
           << "]: " << e.what();
        throw Error(ErrorKind::KernelQuadratureFailed, os.str());
    }
}

Json kernel_diagnostics(const KernelBundle& k)
{
    Json d;
    d["psd_repair_norm"] = k.grid.psd_repair_norm;
    d["cutoff"] = k.grid.regulator.cutoff;
    d["infrared"] = k.grid.regulator.infrared;
    d["free_abs_error"] = k.free.abs_error;
    d["plate_abs_error"] = k.plate.abs_error;
    d["free_evaluations"] = k.free.n_evals;
    d["plate_evaluations"] = k.plate.n_evals;
    return d;
}

std::string sibling(const std::string& path, const std::string& suffix)
{
    const std::size_t dot = path.rfind('.');
    const std::size_t slash = path.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? path.substr(0, dot) : path) + suffix;
}

int cmd_kernels(const Resolved& r, std::ostream& err)
{
    const KernelBundle k = kernels_or_fail(r);
    Json diag = kernel_diagnostics(k);
    if (r.opt.sensitivity) {
        const RegulatorSensitivity s
            = regulator_sensitivity(r.params, time_grid(r.opt), regulator(r), components(r.opt.components), r.tol);
        diag["noise_change_on_doubled_cutoff"] = s.noise_change;
        diag["dissipation_change_on_doubled_cutoff"] = s.dissipation_change;
    }
    Table series{{"k", "tau", "N1", "D1", "N2", "D2"}, {}};
    for (std::size_t i = 0; i < r.opt.n; ++i)
        series.rows.push_back({std::to_string(i), cell(r.opt.dt * static_cast<double>(i)), cell(k.free.noise[i]),
                               cell(k.free.dissipation[i]), cell(k.plate.noise[i]), cell(k.plate.dissipation[i])});
    const Json config = config_json(r);
    if (r.opt.format == "json") {
        emit(r.opt.output, "json", config, diag, series);
    } else {
        std::ostringstream os;
        write_csv(k.grid, os);
        write_file(r.opt.output, os.str());
        const std::string series_path = sibling(r.opt.output, ".series.csv");
        write_file(series_path, to_csv(series));
        diag["series_file"] = series_path;
        write_file(r.opt.output + ".json", sidecar(config, diag));
    }
    err << "kernels: n = " << r.opt.n << ", psd repair norm " << cell(k.grid.psd_repair_norm) << ", written to "
        << r.opt.output << '\n';
    return kOk;
}

KernelGrid gle_kernel(const Resolved& r)
{
    KernelGrid k;
    if (!r.opt.kernel_file.empty()) {
        std::ifstream in(r.opt.kernel_file, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::Io, "cannot open kernel file " + r.opt.kernel_file);
        k = read_csv(in);
    } else {
        k = kernels_or_fail(r).grid;
    }
    if (r.opt.no_dissipation)
        k.dissipation.setZero();
    if (r.opt.no_noise)
        k.noise.setZero();
    return k;
}

Table trajectory_table(const Trajectory& tr)
{
    Table t{{"k", "t", "q", "qdot"}, {}};
    for (std::size_t i = 0; i < tr.q.size(); ++i)
        t.rows.push_back({std::to_string(i), cell(tr.dt * static_cast<double>(i)), cell(tr.q[i]), cell(tr.qdot[i])});
    return t;
}

int cmd_gle(const Resolved& r, std::ostream& err)
{
    const KernelGrid kernel = gle_kernel(r);
    const Json config = config_json(r);
    Json diag;
    diag["n"] = kernel.n();
    diag["dt"] = kernel.dt;
    diag["psd_repair_norm"] = kernel.psd_repair_norm;

    if (r.opt.noise_only) {
        if (r.opt.samples < 2)
            throw ParamOutOfRange("samples", static_cast<double>(r.opt.samples), "[2, inf)");
        const NoiseStatistics s = noise_statistics(kernel, r.opt.samples, r.opt.seed);
        const double norm = kernel.noise.norm();
        diag["samples"] = r.opt.samples;
        diag["covariance_frobenius_rel_error"] = norm > 0.0 ? (s.covariance - kernel.noise).norm() / norm : 0.0;
        diag["mean_norm"] = s.mean.norm();
        diag["mean_bound"] = 3.0 * std::sqrt(kernel.noise.trace() / static_cast<double>(r.opt.samples));
        Table t{{"i", "j", "sample_covariance", "noise_kernel"}, {}};
        for (Eigen::Index i = 0; i < kernel.noise.rows(); ++i)
            for (Eigen::Index j = 0; j < kernel.noise.cols(); ++j)
                t.rows.push_back({std::to_string(i), std::to_string(j), cell(s.covariance(i, j)),
                                  cell(kernel.noise(i, j))});
        emit(r.opt.output, r.opt.format, config, diag, t);
        err << "gle: noise statistics over " << r.opt.samples << " samples written to " << r.opt.output << '\n';
        return kOk;
    }

    const Oscillator osc{r.params.omega0, r.opt.q0, r.opt.qdot0};
    if (r.opt.members <= 1) {
        std::vector<double> xi;
        if (!r.opt.no_noise) {
            const Eigen::VectorXd z = sample_noise(noise_factor(kernel.noise), r.opt.seed);
            xi.assign(z.data(), z.data() + z.size());
        }
        try {
            const Trajectory tr = integrate_gle(osc, kernel, xi);
            diag["status"] = "ok";
            emit(r.opt.output, r.opt.format, config, diag, trajectory_table(tr));
        } catch (const BlowupDetected& e) {
            diag["status"] = "blowup";
            diag["blowup_step"] = e.step();
            emit(r.opt.output, r.opt.format, config, diag, trajectory_table(e.partial()));
            err << "gle: " << e.what() << "; partial trajectory written to " << r.opt.output << '\n';
            return kNumericError;
        }
        err << "gle: trajectory written to " << r.opt.output << '\n';
        return kOk;
    }

    const EnsembleResult ens = run_ensemble(osc, kernel, r.opt.members, r.opt.seed);
    Table t{{"k", "t", "mean_q", "mean_qdot", "var_q"}, {}};
    for (std::size_t i = 0; i < ens.mean_q.size(); ++i)
        t.rows.push_back({std::to_string(i), cell(kernel.dt * static_cast<double>(i)), cell(ens.mean_q[i]),
                          cell(ens.mean_qdot[i]), cell(ens.var_q[i])});
    diag["members"] = ens.n_requested;
    diag["failed_members"] = ens.failed;
    diag["status"] = ens.failed.empty() ? "ok" : "blowup";
    emit(r.opt.output, r.opt.format, config, diag, t);
    if (!ens.failed.empty()) {
        err << "gle: " << ens.failed.size() << " of " << ens.n_requested << " members blew up\n";
        return kNumericError;
    }
    err << "gle: ensemble of " << ens.n_requested << " written to " << r.opt.output << '\n';
    return kOk;
}

}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    Given given;
    CLI::App app{"Quantum friction and decoherence of a detector moving above a plate"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file");
    add_model_options(app, o, given);

    CLI::App* friction = app.add_subcommand("friction", "Imaginary effective action along a velocity grid");
    friction->add_option("--v-grid", o.v_grid, "Velocity grid min:max:count[:log]")->capture_default_str();

    CLI::App* deco = app.add_subcommand("decoherence", "Decoherence time sweep")->alias("deco");
    deco->add_option("--axis", o.axis, "Sweep axis")
        ->transform(CLI::IsMember({"velocity", "plate-frequency", "plate_frequency"}))
        ->capture_default_str();
    given.grid = deco->add_option("--grid", o.grid, "Grid min:max:count[:log] (x = v or omega_plate*a)");

    CLI::App* kern = app.add_subcommand("kernels", "Noise and dissipation kernels on a time grid");
    CLI::App* gle = app.add_subcommand("gle", "Generalized Langevin trajectories and noise statistics");
    for (CLI::App* sub : {kern, gle}) {
        sub->add_option("--dt", o.dt, "Time step")->capture_default_str();
        sub->add_option("--n", o.n, "Number of time samples")->capture_default_str();
        sub->add_option("--components", o.components, "Kernel parts")
            ->check(CLI::IsMember({"free", "plate", "both"}))
            ->capture_default_str();
    }
    kern->add_flag("--sensitivity", o.sensitivity, "Also report the change under a doubled cutoff");
    gle->add_option("--kernel-file", o.kernel_file, "Kernel CSV from the kernels command");
    gle->add_option("--q0", o.q0, "Initial amplitude")->capture_default_str();
    gle->add_option("--qdot0", o.qdot0, "Initial velocity")->capture_default_str();
    gle->add_option("--members", o.members, "Ensemble size (1 writes a single trajectory)")->capture_default_str();
    gle->add_option("--samples", o.samples, "Noise realisations for --noise-only")->capture_default_str();
    gle->add_flag("--no-noise", o.no_noise, "Drop the stochastic force");
    gle->add_flag("--no-dissipation", o.no_dissipation, "Drop the memory force");
    gle->add_flag("--noise-only", o.noise_only, "Compare sampled noise covariance with the noise kernel");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }
    if (o.axis == "plate_frequency")
        o.axis = "plate-frequency";

    try {
        if (friction->parsed())
            return cmd_friction(resolve("friction", o, given), err);
        if (deco->parsed())
            return cmd_decoherence(resolve("decoherence", o, given), err);
        if (kern->parsed())
            return cmd_kernels(resolve("kernels", o, given), err);
        return cmd_gle(resolve("gle", o, given), err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_config_error(e.kind()) ? kConfigError : kNumericError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericError;
    }
}

}
