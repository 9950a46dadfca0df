#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slotkit/errors.hpp"
#include "slotkit/eval.hpp"
#include "slotkit/image_io.hpp"
#include "slotkit/instruct.hpp"
#include "slotkit/pipeline.hpp"
#include "slotkit/remote.hpp"
#include "slotkit/renderer.hpp"
#include "slotkit/rng.hpp"
#include "slotkit/scene.hpp"
#include "slotkit/scene_io.hpp"
#include "slotkit/stub_server.hpp"

namespace fs = std::filesystem;
using namespace slotkit;

namespace {

std::vector<std::string> default_category_names() {
    std::vector<std::string> names;
    for (Category c : all_categories()) names.push_back(to_string(c));
    return names;
}

std::vector<Category> parse_categories(const std::vector<std::string>& names) {
    std::vector<Category> cats;
    for (const std::string& n : names) cats.push_back(category_from_string(n));
    if (cats.empty()) throw ConfigError("category list is empty");
    return cats;
}

std::pair<int, int> parse_resolution(const std::string& text) {
    int w = 0, h = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%dx%d%c", &w, &h, &extra) != 2 || w <= 0 || h <= 0) {
        throw ConfigError("resolution '" + text + "' is not WIDTHxHEIGHT");
    }
    return {w, h};
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string default_run_id() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%S", &tm);
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
    char out[48];
    std::snprintf(out, sizeof(out), "%s.%03d", stamp, static_cast<int>(ms.count()));
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

// Options shared by gen and eval; the benchmark core (categories, variants,
// seed, resolution) also determines the benchmark fingerprint that ties a
// generated directory to the config that can evaluate it.
struct RunOptions {
    std::vector<std::string> category_names = default_category_names();
    int variants = 5;
    int trials = 50;
    std::uint64_t seed = 2024;
    std::string backend = "oracle";  // oracle | perturbed | remote:HOST:PORT[/path]
    double sigma_px = 2.0;
    double exec_sigma = 0.002;
    double radius = kDefaultSphereRadius;
    std::string resolution = "640x480";
    std::string out;
    std::string benchmark_dir;
    std::string run_id;
    bool verbose_artifacts = false;
};

std::string benchmark_config_text(const RunOptions& opt) {
    std::string cats;
    for (const std::string& n : opt.category_names) {
        if (!cats.empty()) cats += ",";
        cats += n;
    }
    std::string text;
    text += "categories=" + cats + "\n";
    text += "resolution=" + opt.resolution + "\n";
    text += "seed=" + std::to_string(opt.seed) + "\n";
    text += "variants=" + std::to_string(opt.variants) + "\n";
    return text;
}

std::string benchmark_fingerprint(const RunOptions& opt) {
    return hex64(derive_seed(0, benchmark_config_text(opt)));
}

SceneGenParams scene_params_for(const RunOptions& opt) {
    SceneGenParams params;
    const auto [w, h] = parse_resolution(opt.resolution);
    params.image_width = w;
    params.image_height = h;
    return params;
}

// Draws a scene whose five instruction variants all generate; degenerate or
// unsatisfiable draws are re-salted deterministically.
Scene draw_scene_with_instructions(Category cat, int variant, std::uint64_t base_seed,
                                   const SceneGenParams& params,
                                   std::vector<Instruction>* instructions) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::uint64_t s = derive_seed(base_seed, "attempt/" + std::to_string(attempt));
        try {
            Scene scene = generate_scene(cat, variant, s, params);
            std::vector<Instruction> drawn;
            for (int iv = 1; iv <= 5; ++iv) {
                drawn.push_back(generate_instruction(scene, cat, iv, scene.seed));
            }
            if (instructions) *instructions = std::move(drawn);
            return scene;
        } catch (const DegenerateScene&) {
        } catch (const UnsatisfiableOnScene&) {
        }
    }
    throw DegenerateScene("no well-posed scene for " + to_string(cat) + "/" +
                          std::to_string(variant));
}

int cmd_gen(const RunOptions& opt) {
    const std::vector<Category> cats = parse_categories(opt.category_names);
    const SceneGenParams params = scene_params_for(opt);
    const std::string fingerprint = benchmark_fingerprint(opt);
    const fs::path root = opt.out.empty() ? fs::path("benchmark") : fs::path(opt.out);

    ensure_dir(root);
    open_for_write(root / "config.txt")
        << benchmark_config_text(opt) << "fingerprint=" << fingerprint << "\n";

    for (Category cat : cats) {
        for (int v = 1; v <= opt.variants; ++v) {
            const std::uint64_t base =
                derive_seed(opt.seed, "gen/" + to_string(cat) + "/" + std::to_string(v));
            std::vector<Instruction> instructions;
            Scene scene = draw_scene_with_instructions(cat, v, base, params, &instructions);
            scene.fingerprint = fingerprint;

            const fs::path dir = root / to_string(cat) / std::to_string(v);
            ensure_dir(dir);
            save_scene(dir / "scene.json", scene);
            open_for_write(dir / "calib.txt")
                << "# fingerprint: " << fingerprint << "\n"
                << serialize_calibration(scene.rig);
            for (std::size_t i = 0; i < instructions.size(); ++i) {
                const std::string stem = "instr_" + std::to_string(i + 1);
                open_for_write(dir / (stem + ".txt")) << instructions[i].text << "\n";
                open_for_write(dir / (stem + ".constraint"))
                    << print_constraint(instructions[i].constraint) << "\n";
            }

            const RenderResult head = render(scene, scene.rig.head);
            const RenderResult wrist = render(scene, scene.rig.wrist);
            write_png((dir / "head_rgb.png").string(), head.rgb);
            write_depth_png((dir / "head_depth.png").string(), head.depth);
            write_png((dir / "wrist_rgb.png").string(), wrist.rgb);
        }
    }
    std::cout << "benchmark written to " << root.string() << " (config " << fingerprint
              << ")\n";
    return 0;
}

BackendFactory backend_factory_for(const RunOptions& opt) {
    if (opt.backend == "oracle") return oracle_factory(opt.radius);
    if (opt.backend == "perturbed") {
        if (opt.sigma_px < 0) throw ConfigError("--sigma-px must be non-negative");
        return perturbed_oracle_factory(opt.sigma_px, derive_seed(opt.seed, "backend"),
                                        opt.radius);
    }
    if (opt.backend.rfind("remote:", 0) == 0) {
        return remote_backend_factory(parse_endpoint(opt.backend.substr(7)));
    }
    throw ConfigError("backend '" + opt.backend +
                      "' is not oracle, perturbed, or remote:HOST:PORT[/path]");
}

std::string backend_label_for(const RunOptions& opt) {
    if (opt.backend == "perturbed") {
        return "perturbed(sigma_px=" + nlohmann::json(opt.sigma_px).dump() + ")";
    }
    return opt.backend;
}

void check_benchmark_fingerprint(const RunOptions& opt) {
    const fs::path config_path = fs::path(opt.benchmark_dir) / "config.txt";
    std::ifstream in(config_path);
    if (!in) {
        throw ConfigError("benchmark directory has no config.txt: " + config_path.string());
    }
    std::string recorded;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("fingerprint=", 0) == 0) recorded = line.substr(12);
    }
    if (recorded.empty()) {
        throw ConfigError("no fingerprint recorded in " + config_path.string());
    }
    if (recorded != benchmark_fingerprint(opt)) {
        throw ConfigError("benchmark at " + opt.benchmark_dir +
                          " was generated with a different config (fingerprint " + recorded +
                          ", expected " + benchmark_fingerprint(opt) + ")");
    }
}

int cmd_eval(const RunOptions& opt) {
    if (!opt.benchmark_dir.empty()) check_benchmark_fingerprint(opt);

    SuiteConfig cfg;
    cfg.categories = parse_categories(opt.category_names);
    cfg.variants = opt.variants;
    cfg.trials_per_category = opt.trials;
    cfg.seed = opt.seed;
    cfg.sphere_radius = opt.radius;
    cfg.exec_sigma = opt.exec_sigma;
    cfg.scene = scene_params_for(opt);
    cfg.backend_label = backend_label_for(opt);
    cfg.verbose_artifacts = opt.verbose_artifacts;

    const fs::path runs_root = opt.out.empty() ? fs::path("runs") : fs::path(opt.out);
    const std::string run_id = opt.run_id.empty() ? default_run_id() : opt.run_id;
    cfg.out_dir = runs_root / run_id;
    ensure_dir(cfg.out_dir);

    const BackendFactory factory = backend_factory_for(opt);
    const SuiteRun run = run_suite(cfg, factory);

    open_for_write(cfg.out_dir / "report.json") << report_to_json(run.report).dump(2) << "\n";
    open_for_write(cfg.out_dir / "report.csv") << report_csv(run.report);
    const std::string table = format_report(run.report);
    open_for_write(cfg.out_dir / "report.txt") << table;
    std::cout << table << "artifacts: " << cfg.out_dir.string() << "\n";
    return 0;
}

struct OverlayOptions {
    std::string scene_path;
    int slot = -1;
    std::vector<double> anchor;
    double radius = kDefaultSphereRadius;
    std::string out = ".";
};

int cmd_overlay(const OverlayOptions& opt) {
    const Scene scene = load_scene(opt.scene_path);

    WorldPoint anchor;
    if (!opt.anchor.empty()) {
        anchor.p = Vec3(opt.anchor[0], opt.anchor[1], opt.anchor[2]);
    } else {
        if (opt.slot < 0 || opt.slot >= static_cast<int>(scene.tray.slots.size())) {
            throw ConfigError("slot index " + std::to_string(opt.slot) +
                              " out of range; scene has " +
                              std::to_string(scene.tray.slots.size()) + " slots");
        }
        anchor = scene.tray.slots[opt.slot].center;
    }

    const GoalOverlays overlays = render_goal_overlays(scene, anchor, opt.radius);
    ensure_dir(opt.out);
    write_png((fs::path(opt.out) / "head_overlay.png").string(), overlays.head);
    write_png((fs::path(opt.out) / "wrist_overlay.png").string(), overlays.wrist);
    if (!overlays.head_depth) {
        std::cerr << "warning: anchor behind the head camera; head overlay has no marker\n";
    }
    if (!overlays.wrist_depth) {
        std::cerr << "warning: anchor behind the wrist camera; wrist overlay has no marker\n";
    }
    return 0;
}

struct StubOptions {
    int port = 0;
    std::string mode = "echo";  // echo | resize:WxH | refuse | garble
};

int cmd_stub(const StubOptions& opt) {
    StubServer server = [&] {
        if (opt.mode == "echo") return StubServer::echo();
        if (opt.mode == "refuse") return StubServer::refusing();
        if (opt.mode == "garble") return StubServer::garbled();
        if (opt.mode.rfind("resize:", 0) == 0) {
            const auto [w, h] = parse_resolution(opt.mode.substr(7));
            return StubServer::resized(w, h);
        }
        throw ConfigError("stub mode '" + opt.mode +
                          "' is not echo, resize:WxH, refuse, or garble");
    }();
    const int port = server.start(opt.port);
    std::cout << "stub server (" << opt.mode << ") listening on 127.0.0.1:" << port
              << std::endl;
    server.wait();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slot-level placement benchmark toolkit"};
    app.require_subcommand(1);

    RunOptions run;
    OverlayOptions overlay;
    StubOptions stub;

    const auto add_common = [&run](CLI::App* cmd, bool eval_only) {
        cmd->add_option("--categories", run.category_names,
                        "task categories (comma separated)")
            ->delimiter(',');
        cmd->add_option("--variants", run.variants, "scene variants per category")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", run.seed, "root seed; all randomness derives from it");
        cmd->add_option("--resolution", run.resolution, "camera resolution WIDTHxHEIGHT");
        cmd->add_option("--radius", run.radius, "marker sphere radius, meters")
            ->check(CLI::PositiveNumber);
        if (eval_only) {
            cmd->add_option("--trials", run.trials, "trials per category")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--backend", run.backend,
                            "grounding backend: oracle | perturbed | remote:HOST:PORT[/path]");
            cmd->add_option("--sigma-px", run.sigma_px,
                            "pixel noise of the perturbed backend");
            cmd->add_option("--exec-sigma", run.exec_sigma,
                            "executor lateral noise, meters")
                ->check(CLI::NonNegativeNumber);
            cmd->add_option("--benchmark", run.benchmark_dir,
                            "benchmark directory to check the config fingerprint against");
            cmd->add_option("--run-id", run.run_id,
                            "report directory name (default: UTC timestamp)");
            cmd->add_flag("--verbose-artifacts", run.verbose_artifacts,
                          "persist overlays for successful trials too");
        }
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a benchmark directory");
    add_common(gen, false);
    gen->add_option("--out", run.out, "output directory (default: benchmark)");

    CLI::App* eval = app.add_subcommand("eval", "run an evaluation suite");
    add_common(eval, true);
    eval->add_option("--out", run.out, "reports root (default: runs)");

    CLI::App* ovl = app.add_subcommand("overlay", "render goal overlays for a scene");
    ovl->add_option("scene", overlay.scene_path, "scene.json path")->required();
    ovl->add_option("--slot", overlay.slot, "slot index to mark");
    ovl->add_option("--anchor", overlay.anchor, "world point to mark: X Y Z")
        ->expected(3);
    ovl->add_option("--radius", overlay.radius, "marker sphere radius, meters")
        ->check(CLI::PositiveNumber);
    ovl->add_option("--out", overlay.out, "output directory");

    CLI::App* stub_cmd = app.add_subcommand("stub", "run the wire-contract stub server");
    stub_cmd->add_option("--port", stub.port, "port to bind (0 picks a free one)");
    stub_cmd->add_option("--mode", stub.mode, "echo | resize:WxH | refuse | garble");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(run);
        if (eval->parsed()) return cmd_eval(run);
        if (ovl->parsed()) {
            if (overlay.anchor.empty() && overlay.slot < 0) {
                throw ConfigError("overlay needs --slot or --anchor");
            }
            return cmd_overlay(overlay);
        }
        if (stub_cmd->parsed()) return cmd_stub(stub);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
