// twinchan - hybrid ray-traced / stochastic THz urban macrocell channel simulator
// Copyright (C) 2026 twinchan contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Batch front end. Subcommands: scene validate, twin build, twin fcr,
// channel generate, characterize, linkeval. Every run is deterministic given
// its inputs and --seed; sub-seeds derive from the master seed by counter.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "twinchan/twinchan.hpp"

namespace fs = std::filesystem;
using namespace twinchan;

namespace {

/// Registers every file written by a subcommand so partial outputs can be
/// removed when the command fails.
class OutputGuard
{
  public:
    std::ofstream open(const fs::path &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write output file: " + path.string());
        created_.push_back(path);
        return out;
    }
    void track(const fs::path &path) { created_.push_back(path); }
    void discard_all()
    {
        for (const auto &p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void commit() { created_.clear(); }

  private:
    std::vector<fs::path> created_;
};

std::vector<std::string> read_lines(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty())
            lines.push_back(t);
    }
    return lines;
}

std::vector<double> parse_list(const std::string &csv)
{
    std::vector<double> out;
    for (const auto &f : split_csv_line(csv))
        out.push_back(parse_double(trim(f)));
    if (out.empty())
        throw std::runtime_error("empty list: " + csv);
    return out;
}

// Reference points: name,pixel_x,pixel_y,world_az_deg,world_el_deg
struct RefPoint
{
    std::string name;
    int x = 0, y = 0;
    Direction world;
};

std::vector<RefPoint> load_refs(const std::string &path)
{
    std::vector<RefPoint> refs;
    for (const auto &line : read_lines(path)) {
        const auto f = split_csv_line(line);
        if (f.size() != 5)
            throw std::runtime_error("malformed reference row: " + line);
        if (f[0] == "name")
            continue; // header
        RefPoint r;
        r.name = f[0];
        r.x = static_cast<int>(parse_int(f[1]));
        r.y = static_cast<int>(parse_int(f[2]));
        r.world = Direction::of(parse_double(f[3]), parse_double(f[4]));
        refs.push_back(r);
    }
    if (refs.empty())
        throw std::runtime_error("no reference points in " + path);
    return refs;
}

// Labels: pixel_x,pixel_y,class with class 1 = foliage.
std::vector<LabeledPixel> load_labels(const std::string &path, const Image &img)
{
    std::vector<LabeledPixel> labels;
    for (const auto &line : read_lines(path)) {
        const auto f = split_csv_line(line);
        if (f.size() != 3)
            throw std::runtime_error("malformed label row: " + line);
        if (f[0] == "pixel_x")
            continue;
        LabeledPixel p;
        p.x = static_cast<int>(parse_int(f[0]));
        p.y = static_cast<int>(parse_int(f[1]));
        const long long cls = parse_int(f[2]);
        if (cls != 0 && cls != 1)
            throw std::runtime_error("label class must be 0 or 1: " + line);
        p.foliage = cls == 1;
        p.color = img.at(p.x, p.y);
        labels.push_back(p);
    }
    if (labels.empty())
        throw std::runtime_error("no labels in " + path);
    return labels;
}

std::vector<Vec3> load_rx_file(const std::string &path)
{
    std::vector<Vec3> out;
    for (const auto &line : read_lines(path)) {
        const auto f = split_csv_line(line);
        if (f.size() != 3)
            throw std::runtime_error("malformed receiver row: " + line);
        if (f[0] == "x")
            continue;
        out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
    }
    return out;
}

void write_metadata(OutputGuard &guard, const fs::path &dir, const std::string &command,
                    std::uint64_t seed, const nlohmann::json &inputs)
{
    nlohmann::json doc;
    doc["command"] = command;
    doc["seed"] = seed;
    doc["seed_derivation"] = "splitmix64 counter over the master seed";
    doc["inputs"] = inputs;
    auto out = guard.open(dir / "run_metadata.json");
    out << doc.dump(2) << "\n";
}

// ---- scene validate ---------------------------------------------------------------

int cmd_scene_validate(const std::string &scene_path)
{
    std::vector<std::string> warnings;
    const Scene scene = load_scene(scene_path, &warnings);
    for (const auto &w : warnings)
        std::cout << "warning: " << w << "\n";
    const auto diags = validate_scene(scene);
    for (const auto &d : diags)
        std::cout << (d.error ? "error: " : "warning: ")
                  << (d.building >= 0 ? "building " + std::to_string(d.building) + ": " : "")
                  << d.message << "\n";
    bool any_error = false;
    for (const auto &d : diags)
        any_error = any_error || d.error;
    if (!any_error)
        std::cout << "scene ok: " << scene.buildings.size() << " buildings, tx height "
                  << format_double(scene.tx.z) << " m, frequency "
                  << format_double(scene.frequency_hz / 1e9) << " GHz\n";
    return any_error ? 1 : 0;
}

// ---- twin build --------------------------------------------------------------------

struct TwinBuildArgs
{
    std::string panorama, refs, labels, out_dir;
    double cell_deg = 0.1;
    int n_neighbors = 22;
    int report_max_n = 40;
    std::vector<double> prefilter_color{63, 71, 204};
    double prefilter_threshold = 50.0;
    double window_deg = 3.9;
    double loss_slope = -30.0;
    double loss_threshold = 0.337;
    double chi_mu = -0.15;
    double chi_sigma = 4.31;
    double dphi = 0.0, dtheta = 0.0, phi0 = -180.0, theta0 = -90.0;
    bool no_flip = false;
    std::uint64_t seed = 1;
};

int cmd_twin_build(const TwinBuildArgs &args)
{
    OutputGuard guard;
    try {
        const fs::path out_dir(args.out_dir);
        fs::create_directories(out_dir);

        const Image img = load_ppm(args.panorama);
        ErpParams erp;
        erp.width = img.width();
        erp.height = img.height();
        erp.dphi_deg = args.dphi > 0 ? args.dphi : 360.0 / img.width();
        erp.dtheta_deg = args.dtheta > 0 ? args.dtheta : 180.0 / img.height();
        erp.phi0_deg = args.phi0;
        erp.theta0_deg = args.theta0;
        erp.validate();

        // Pose from reference points; raster rows flip into ERP rows.
        std::vector<std::pair<Direction, Direction>> pairs;
        for (const auto &r : load_refs(args.refs)) {
            const int ey = args.no_flip ? r.y : erp.height - 1 - r.y;
            pairs.emplace_back(erp_pixel_to_camera(r.x, ey, erp), r.world);
        }
        const PoseSolveResult pose = solve_pose(pairs);
        if (pose.degenerate)
            throw std::runtime_error("pose solver degeneracy: " + pose.note);
        std::cout << "pose: alpha_z1 " << format_double(pose.pose.alpha_z1_deg)
                  << " deg, alpha_y " << format_double(pose.pose.alpha_y_deg)
                  << " deg, alpha_z2 " << format_double(pose.pose.alpha_z2_deg)
                  << " deg, residual rms " << format_double(pose.residual_rms_deg)
                  << " deg\n";

        auto labels = load_labels(args.labels, img);
        int n_fol = 0, n_non = 0;
        for (const auto &l : labels)
            (l.foliage ? n_fol : n_non)++;
        if (n_fol == 0 || n_non == 0)
            throw std::runtime_error("both classes required in the label file");

        // Seeded 60/40 split and accuracy-vs-neighbor-count report.
        Rng split_rng(split_seed(args.seed, 0));
        for (std::size_t i = labels.size() - 1; i > 0; --i)
            std::swap(labels[i], labels[split_rng.below(i + 1)]);
        const std::size_t n_train = std::max<std::size_t>(1, labels.size() * 6 / 10);
        const std::vector<LabeledPixel> train(labels.begin(),
                                              labels.begin() + static_cast<long>(n_train));
        const std::vector<LabeledPixel> test(labels.begin() + static_cast<long>(n_train),
                                             labels.end());
        if (test.empty())
            throw std::runtime_error("not enough labels for a 60/40 split");

        const int max_n = std::min<int>(args.report_max_n, static_cast<int>(train.size()));
        std::vector<int> correct(static_cast<std::size_t>(max_n) + 1, 0);
        for (const auto &t : test) {
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(train.size());
            for (std::size_t i = 0; i < train.size(); ++i)
                dist.emplace_back(color_difference(t.color, train[i].color), i);
            std::sort(dist.begin(), dist.end());
            int votes = 0;
            for (int k = 1; k <= max_n; ++k) {
                votes += train[dist[static_cast<std::size_t>(k - 1)].second].foliage ? 1 : 0;
                const bool predicted = votes > k - votes;
                if (predicted == t.foliage)
                    ++correct[static_cast<std::size_t>(k)];
            }
        }
        {
            auto out = guard.open(out_dir / "knn_accuracy.csv");
            out << "n_neighbors,accuracy\n";
            for (int k = 1; k <= max_n; ++k)
                out << k << ','
                    << format_double(static_cast<double>(correct[static_cast<std::size_t>(k)]) /
                                     static_cast<double>(test.size()))
                    << '\n';
        }

        PrefilterParams prefilter;
        if (args.prefilter_color.size() != 3)
            throw std::runtime_error("--prefilter-color needs three components");
        prefilter.ref_color = {static_cast<std::uint8_t>(args.prefilter_color[0]),
                               static_cast<std::uint8_t>(args.prefilter_color[1]),
                               static_cast<std::uint8_t>(args.prefilter_color[2])};
        prefilter.threshold = args.prefilter_threshold;

        TwinBuildParams build;
        build.cell_deg = args.cell_deg;
        build.n_neighbors = args.n_neighbors;
        build.flip_vertical = !args.no_flip;
        build.loss = {args.loss_slope, args.loss_threshold, args.chi_mu, args.chi_sigma,
                      args.window_deg};

        const FoliageTwin twin =
            build_twin(img, erp, pose.pose, labels, prefilter, build);
        // save_twin writes two files; register both before writing.
        guard.track(out_dir / "twin.json");
        guard.track(out_dir / "twin_mask.pgm");
        save_twin(twin, (out_dir / "twin.json").string(), "twin_mask.pgm");

        long foliage_cells = 0;
        for (auto v : twin.mask)
            foliage_cells += v ? 1 : 0;
        std::cout << "twin: " << twin.n_az << "x" << twin.n_el << " cells at "
                  << format_double(twin.cell_deg) << " deg, " << foliage_cells
                  << " foliage cells\n";

        write_metadata(guard, out_dir, "twin build", args.seed,
                       {{"panorama", args.panorama},
                        {"refs", args.refs},
                        {"labels", args.labels},
                        {"n_labels", labels.size()},
                        {"n_train", n_train}});
        guard.commit();
        return 0;
    } catch (...) {
        guard.discard_all();
        throw;
    }
}

// ---- twin fcr ----------------------------------------------------------------------

int cmd_twin_fcr(const std::string &twin_path, double az, double el, double window)
{
    const FoliageTwin twin = load_twin(twin_path);
    const double w = window > 0 ? window : twin.loss.window_deg;
    const double fcr = compute_fcr(twin, Direction::of(az, el), w);
    std::cout << "fcr=" << format_double(fcr) << "\n";
    std::cout << "loss_db=" << format_double(foliage_loss(fcr, twin.loss)) << "\n";
    return 0;
}

// ---- channel generate ---------------------------------------------------------------

struct GenerateArgs
{
    std::string scene, twin, params, rx_file, out_dir;
    std::vector<std::string> rx_list;
    std::uint64_t seed = 1;
    bool no_stochastic = false;
    bool no_chi = false;
    bool emit_cir = false;
    int n_taps = default_n_taps;
    double tap_spacing = default_tap_spacing_s;
    double dynamic_range = 30.0;
    double noise_floor = -180.5;
    bool no_threshold = false;
};

int cmd_channel_generate(const GenerateArgs &args)
{
    OutputGuard guard;
    try {
        const fs::path out_dir(args.out_dir);
        fs::create_directories(out_dir);

        std::vector<std::string> warnings;
        const Scene scene = load_scene(args.scene, &warnings);
        for (const auto &w : warnings)
            std::cerr << "warning: " << w << "\n";
        const FoliageTwin twin = load_twin(args.twin);
        const StateParamsSet params =
            args.params.empty() ? default_params() : load_params(args.params);

        std::vector<Vec3> rx;
        if (!args.rx_file.empty())
            rx = load_rx_file(args.rx_file);
        for (const auto &spec : args.rx_list) {
            const auto f = split_csv_line(spec);
            if (f.size() != 3)
                throw std::runtime_error("--rx expects x,y,z: " + spec);
            rx.push_back({parse_double(trim(f[0])), parse_double(trim(f[1])),
                          parse_double(trim(f[2]))});
        }
        if (rx.empty())
            throw std::runtime_error("no receiver positions (use --rx or --rx-file)");

        AssembleOptions options;
        options.with_stochastic = !args.no_stochastic;
        options.with_foliage_chi = !args.no_chi;

        MetricsOptions metrics_options;
        metrics_options.threshold_first = !args.no_threshold;
        metrics_options.dynamic_range_db = args.dynamic_range;
        metrics_options.noise_floor_db = args.noise_floor;

        auto mpcs_csv = guard.open(out_dir / "mpcs.csv");
        auto mpcs_jsonl = guard.open(out_dir / "mpcs.jsonl");
        auto metrics_csv = guard.open(out_dir / "metrics.csv");
        mpcs_csv << mpc_csv_header() << '\n';
        metrics_csv << metrics_csv_header() << '\n';

        int outages = 0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            const std::string id = std::to_string(i);
            const ChannelRealization real =
                assemble(scene, twin, params, rx[i], split_seed(args.seed, i), options);
            write_mpcs_csv(mpcs_csv, id, real);
            write_mpcs_jsonl(mpcs_jsonl, id, real);
            write_metrics_csv(metrics_csv,
                              compute_metrics(id, real.state, real.mpcs, metrics_options));
            if (real.state == ChannelState::outage) {
                ++outages;
                continue;
            }
            if (args.emit_cir) {
                const Cir cir = sample_cir(real, args.tap_spacing, args.n_taps);
                for (const auto &w : cir.warnings)
                    std::cerr << "warning: realization " << id << ": " << w << "\n";
                auto cir_csv = guard.open(out_dir / ("cir_" + id + ".csv"));
                write_cir_csv(cir_csv, cir);
            }
        }

        write_metadata(guard, out_dir, "channel generate", args.seed,
                       {{"scene", args.scene},
                        {"twin", args.twin},
                        {"params", args.params},
                        {"n_rx", rx.size()},
                        {"stochastic", options.with_stochastic},
                        {"foliage_chi", options.with_foliage_chi}});
        std::cout << "generated " << rx.size() << " realizations (" << outages
                  << " outage)\n";
        guard.commit();
        return 0;
    } catch (...) {
        guard.discard_all();
        throw;
    }
}

// ---- characterize -------------------------------------------------------------------

struct CharacterizeArgs
{
    std::string mpcs, out;
    double dynamic_range = 30.0;
    double noise_floor = -180.5;
    bool no_threshold = false;
    double eps = 0.2;
    int min_pts = 3;
    double zeta = 8.0;
};

int cmd_characterize(const CharacterizeArgs &args)
{
    OutputGuard guard;
    try {
        std::ifstream in(args.mpcs);
        if (!in)
            throw std::runtime_error("cannot open MPC file: " + args.mpcs);
        const auto records = read_mpcs_csv(in);

        MetricsOptions options;
        options.threshold_first = !args.no_threshold;
        options.dynamic_range_db = args.dynamic_range;
        options.noise_floor_db = args.noise_floor;
        options.mcd.eps = args.eps;
        options.mcd.min_pts = args.min_pts;
        options.mcd.zeta = args.zeta;

        auto out = guard.open(args.out);
        out << metrics_csv_header() << '\n';
        for (const auto &rec : records)
            write_metrics_csv(out, compute_metrics(rec.id, rec.state, rec.mpcs, options));
        std::cout << "characterized " << records.size() << " realizations\n";
        guard.commit();
        return 0;
    } catch (...) {
        guard.discard_all();
        throw;
    }
}

// ---- linkeval -----------------------------------------------------------------------

struct LinkevalArgs
{
    std::string scene, twin, params, out;
    std::string gains = "30,50,70";
    std::string radii = "50,100,200,400";
    int drops = 10000;
    double pt = 13.0, nf = 10.0, temp = 300.0, bw = 2e9, snr_th = 0.0;
    double sector_start = -90.0, sector_extent = 180.0, rx_height = 1.6;
    std::uint64_t seed = 1;
    bool no_stochastic = false;
    bool no_chi = false;
};

int cmd_linkeval(const LinkevalArgs &args)
{
    OutputGuard guard;
    try {
        std::vector<std::string> warnings;
        const Scene scene = load_scene(args.scene, &warnings);
        for (const auto &w : warnings)
            std::cerr << "warning: " << w << "\n";
        const FoliageTwin twin = load_twin(args.twin);
        const StateParamsSet params =
            args.params.empty() ? default_params() : load_params(args.params);

        LinkConfig cfg;
        cfg.pt_dbm = args.pt;
        cfg.noise_figure_db = args.nf;
        cfg.temperature_k = args.temp;
        cfg.bandwidth_hz = args.bw;
        cfg.snr_threshold_db = args.snr_th;
        cfg.rx_height_m = args.rx_height;
        cfg.sector = {args.sector_start, args.sector_extent};
        cfg.n_drops = args.drops;

        AssembleOptions options;
        options.with_stochastic = !args.no_stochastic;
        options.with_foliage_chi = !args.no_chi;

        const auto rows = sweep(scene, twin, params, cfg, parse_list(args.gains),
                                parse_list(args.radii), args.seed, options);
        auto out = guard.open(args.out);
        out << sweep_csv_header() << '\n';
        for (const auto &row : rows)
            write_sweep_csv(out, row);
        std::cout << "evaluated " << rows.size() << " sweep points\n";
        guard.commit();
        return 0;
    } catch (...) {
        guard.discard_all();
        throw;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid ray-traced / stochastic THz urban macrocell channel simulator"};
    app.require_subcommand(1);

    // scene validate
    auto *scene_cmd = app.add_subcommand("scene", "Scene file utilities");
    scene_cmd->require_subcommand(1);
    std::string scene_path;
    auto *scene_validate = scene_cmd->add_subcommand("validate", "Validate a scene file");
    scene_validate->add_option("scene", scene_path, "Scene JSON file")->required();

    // twin build / twin fcr
    auto *twin_cmd = app.add_subcommand("twin", "Foliage digital twin utilities");
    twin_cmd->require_subcommand(1);
    TwinBuildArgs tb;
    auto *twin_build = twin_cmd->add_subcommand(
        "build", "Build a foliage twin from an annotated panorama");
    twin_build->add_option("--panorama", tb.panorama, "Panorama image (PPM)")->required();
    twin_build->add_option("--refs", tb.refs, "Reference point CSV")->required();
    twin_build->add_option("--labels", tb.labels, "Labeled pixel CSV")->required();
    twin_build->add_option("--out", tb.out_dir, "Output directory")->required();
    twin_build->add_option("--resolution", tb.cell_deg, "Mask cell size in degrees");
    twin_build->add_option("--neighbors", tb.n_neighbors, "KNN neighbor count");
    twin_build->add_option("--report-max-n", tb.report_max_n,
                           "Largest neighbor count in the accuracy report");
    twin_build->add_option("--prefilter-color", tb.prefilter_color,
                           "Annotation reference color R G B")
        ->expected(3);
    twin_build->add_option("--prefilter-threshold", tb.prefilter_threshold,
                           "Color-difference threshold");
    twin_build->add_option("--window", tb.window_deg, "Beam-footprint window in degrees");
    twin_build->add_option("--loss-slope", tb.loss_slope, "Loss slope dB per unit FCR");
    twin_build->add_option("--loss-threshold", tb.loss_threshold, "FCR onset of loss");
    twin_build->add_option("--chi-mu", tb.chi_mu, "Loss scatter mean dB");
    twin_build->add_option("--chi-sigma", tb.chi_sigma, "Loss scatter sigma dB");
    twin_build->add_option("--dphi", tb.dphi, "Azimuth degrees per pixel");
    twin_build->add_option("--dtheta", tb.dtheta, "Elevation degrees per pixel");
    twin_build->add_option("--phi0", tb.phi0, "Azimuth of the reference corner pixel");
    twin_build->add_option("--theta0", tb.theta0, "Elevation of the reference corner pixel");
    twin_build->add_flag("--no-flip-y", tb.no_flip,
                         "Treat raster row 0 as the ERP reference row");
    twin_build->add_option("--seed", tb.seed, "Master seed for the train/test split");

    std::string fcr_twin;
    double fcr_az = 0.0, fcr_el = 0.0, fcr_window = 0.0;
    auto *twin_fcr =
        twin_cmd->add_subcommand("fcr", "Evaluate the foliage coverage ratio");
    twin_fcr->add_option("--twin", fcr_twin, "Twin JSON file")->required();
    twin_fcr->add_option("--az", fcr_az, "Azimuth in degrees")->required();
    twin_fcr->add_option("--el", fcr_el, "Elevation in degrees")->required();
    twin_fcr->add_option("--window", fcr_window, "Window radius (default: twin's)");

    // channel generate
    auto *channel_cmd = app.add_subcommand("channel", "Channel generation");
    channel_cmd->require_subcommand(1);
    GenerateArgs gen;
    auto *channel_generate =
        channel_cmd->add_subcommand("generate", "Generate channel realizations");
    channel_generate->add_option("--scene", gen.scene, "Scene JSON file")->required();
    channel_generate->add_option("--twin", gen.twin, "Twin JSON file")->required();
    channel_generate->add_option("--params", gen.params,
                                 "State parameter JSON file (default: built-in)");
    channel_generate->add_option("--rx", gen.rx_list, "Receiver position x,y,z (repeatable)");
    channel_generate->add_option("--rx-file", gen.rx_file, "Receiver CSV (x,y,z)");
    channel_generate->add_option("--out", gen.out_dir, "Output directory")->required();
    channel_generate->add_option("--seed", gen.seed, "Master seed");
    channel_generate->add_flag("--no-stochastic", gen.no_stochastic,
                               "Skip non-dominant cluster generation");
    channel_generate->add_flag("--no-chi", gen.no_chi, "Disable the foliage loss scatter");
    channel_generate->add_flag("--emit-cir", gen.emit_cir, "Write sampled CIRs");
    channel_generate->add_option("--taps", gen.n_taps, "CIR tap count");
    channel_generate->add_option("--tap-spacing", gen.tap_spacing, "CIR tap spacing in s");
    channel_generate->add_option("--dynamic-range", gen.dynamic_range,
                                 "Metrics dynamic range in dB");
    channel_generate->add_option("--noise-floor", gen.noise_floor,
                                 "Metrics noise floor in dB");
    channel_generate->add_flag("--no-threshold", gen.no_threshold,
                               "Compute metrics without dynamic-range thresholding");

    // characterize
    CharacterizeArgs ch;
    auto *characterize =
        app.add_subcommand("characterize", "Compute channel metrics from MPC records");
    characterize->add_option("--mpcs", ch.mpcs, "MPC CSV file")->required();
    characterize->add_option("--out", ch.out, "Metrics CSV output")->required();
    characterize->add_option("--dynamic-range", ch.dynamic_range, "Dynamic range in dB");
    characterize->add_option("--noise-floor", ch.noise_floor, "Noise floor in dB");
    characterize->add_flag("--no-threshold", ch.no_threshold,
                           "Skip dynamic-range thresholding");
    characterize->add_option("--eps", ch.eps, "DBSCAN epsilon in MCD units");
    characterize->add_option("--min-pts", ch.min_pts, "DBSCAN core point threshold");
    characterize->add_option("--zeta", ch.zeta, "MCD delay weight");

    // linkeval
    LinkevalArgs le;
    auto *linkeval = app.add_subcommand("linkeval", "Monte Carlo link performance sweep");
    linkeval->add_option("--scene", le.scene, "Scene JSON file")->required();
    linkeval->add_option("--twin", le.twin, "Twin JSON file")->required();
    linkeval->add_option("--params", le.params, "State parameter JSON file");
    linkeval->add_option("--out", le.out, "Results CSV output")->required();
    linkeval->add_option("--gains", le.gains, "Total gain list in dB, comma separated");
    linkeval->add_option("--radii", le.radii, "Cell radius list in m, comma separated");
    linkeval->add_option("--drops", le.drops, "Monte Carlo drops per sweep point");
    linkeval->add_option("--pt", le.pt, "Transmit power in dBm");
    linkeval->add_option("--nf", le.nf, "Noise figure in dB");
    linkeval->add_option("--temp", le.temp, "Temperature in K");
    linkeval->add_option("--bw", le.bw, "Bandwidth in Hz");
    linkeval->add_option("--snr-th", le.snr_th, "Coverage SNR threshold in dB");
    linkeval->add_option("--sector-start", le.sector_start, "Sector start azimuth");
    linkeval->add_option("--sector-extent", le.sector_extent, "Sector extent in degrees");
    linkeval->add_option("--rx-height", le.rx_height, "Receiver height in m");
    linkeval->add_option("--seed", le.seed, "Master seed");
    linkeval->add_flag("--no-stochastic", le.no_stochastic,
                       "Skip non-dominant cluster generation");
    linkeval->add_flag("--no-chi", le.no_chi, "Disable the foliage loss scatter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scene_validate->parsed())
            return cmd_scene_validate(scene_path);
        if (twin_build->parsed())
            return cmd_twin_build(tb);
        if (twin_fcr->parsed())
            return cmd_twin_fcr(fcr_twin, fcr_az, fcr_el, fcr_window);
        if (channel_generate->parsed())
            return cmd_channel_generate(gen);
        if (characterize->parsed())
            return cmd_characterize(ch);
        if (linkeval->parsed())
            return cmd_linkeval(le);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
