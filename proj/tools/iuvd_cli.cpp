#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/pipeline.hpp"
#include "iuvd/wire.hpp"
#include "json.hpp"

using namespace iuvd;
using Json = nlohmann::ordered_json;

namespace {

// Lets --config read JSON. Nested objects map to subcommand sections.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it->is_object()) {
        auto sub = parents;
        sub.push_back(it.key());
        collect(*it, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else if (it->is_boolean()) {
        item.inputs = {it->get<bool>() ? "true" : "false"};
      } else {
        item.inputs = {scalar(*it)};
      }
      items.push_back(std::move(item));
    }
  }
};

struct TemplateArgs {
  std::string source = "toy";
  std::string manifest;
  std::vector<std::string> passthrough;
  int res = 64;
  std::string uv_scale = "linear";
  int dilate = 2;
  int vis_res = 512;
};

struct QueryArgs {
  double alpha = 1.0 / 128.0;
  int dmin = -10;
  int dmax = 10;
  int levels = 0;  // 0: 2 for IUVD, 3 for XYZ
  int n = 257;
  std::string provider = "oracle:sin";
  double ramp = 0.0;
  std::uint64_t seed = 1;
};

void add_template_options(CLI::App* cmd, TemplateArgs& a) {
  cmd->add_option("--template", a.source, "toy, sphere, quad, or a part-grouped OBJ path")->capture_default_str();
  cmd->add_option("--manifest", a.manifest, "template manifest JSON (default: <obj>.json when present)");
  cmd->add_option("--passthrough", a.passthrough, "parts copied from the template (indices or names)")
      ->delimiter(',');
  cmd->add_option("--res", a.res, "atlas resolution U = V")->check(CLI::Range(8, 8192))->capture_default_str();
  cmd->add_option("--uv-scale", a.uv_scale, "chart scaling: linear (area ratio) or sqrt")
      ->check(CLI::IsMember({"linear", "sqrt"}))
      ->capture_default_str();
  cmd->add_option("--dilate", a.dilate, "mask dilation iterations")->check(CLI::Range(0, 64))->capture_default_str();
  cmd->add_option("--vis-res", a.vis_res, "visibility depth buffer resolution")
      ->check(CLI::Range(8, 8192))
      ->capture_default_str();
}

void add_query_options(CLI::App* cmd, QueryArgs& a) {
  cmd->add_option("--alpha", a.alpha, "metric length of one D step (m)")->capture_default_str();
  cmd->add_option("--dmin", a.dmin, "lowest D sample")->capture_default_str();
  cmd->add_option("--dmax", a.dmax, "highest D sample")->capture_default_str();
  cmd->add_option("--levels", a.levels, "octree levels (default 2 in IUVD, 3 in XYZ)")->check(CLI::Range(1, 10));
  cmd->add_option("--n", a.n, "XYZ grid resolution (odd)")->capture_default_str();
  cmd->add_option("--provider", a.provider,
                  "oracle:const|sin|smooth|sphere[:args], stub:<us>[:kind], constant:<v>, "
                  "threshold:<t>, exec:<cmd>, tcp:<host:port>")
      ->capture_default_str();
  cmd->add_option("--ramp", a.ramp, "oracle ramp half-width in meters (0 = hard 0/1)")->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed for random fields and sampling")->capture_default_str();
}

TemplateModel load_template_arg(const TemplateArgs& a) {
  TemplateModel model;
  if (a.source == "toy") {
    model = generate_toy_mannequin();
  } else if (a.source == "sphere") {
    model = generate_sphere_template();
  } else if (a.source == "quad") {
    model = generate_quad_template();
  } else {
    const std::filesystem::path obj(a.source);
    if (!std::filesystem::exists(obj)) throw ConfigError("template not found: " + obj.string());
    TemplateManifest manifest;
    std::filesystem::path mpath = a.manifest;
    if (mpath.empty() && std::filesystem::exists(std::filesystem::path(obj).replace_extension(".json")))
      mpath = std::filesystem::path(obj).replace_extension(".json");
    if (!mpath.empty()) manifest = load_manifest(mpath);
    std::vector<std::string> warnings;
    model = load_template(obj, manifest, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  if (!a.passthrough.empty()) {
    std::vector<int> parts;
    for (const std::string& token : a.passthrough) {
      int found = -1;
      for (const PartMesh& p : model.parts)
        if (p.name == token) found = p.part_index;
      if (found < 0) {
        try {
          std::size_t used = 0;
          found = std::stoi(token, &used);
          if (used != token.size()) found = -1;
        } catch (const std::exception&) {
          found = -1;
        }
      }
      if (found < 0 || found >= model.part_count()) throw ConfigError("unknown passthrough part '" + token + "'");
      parts.push_back(found);
    }
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    model.passthrough_parts = parts;
  }
  return model;
}

AtlasOptions atlas_options(const TemplateArgs& a) {
  AtlasOptions o;
  o.resolution = a.res;
  o.uv_scale = a.uv_scale == "sqrt" ? UvScaleMode::kSqrt : UvScaleMode::kLinear;
  o.dilation = a.dilate;
  o.visibility_resolution = a.vis_res;
  return o;
}

ProviderContext provider_context(const TemplateModel& model, const QueryArgs& q) {
  ProviderContext c;
  c.ramp_width = q.ramp;
  c.seed = q.seed;
  const Box3 box = model.bounds();
  c.sphere_center = box.center();
  c.sphere_radius = 0.5 * box.sizes().minCoeff() + 0.02;
  return c;
}

PipelineConfig pipeline_config(const QueryArgs& q, bool xyz) {
  PipelineConfig c;
  c.query.alpha = q.alpha;
  c.query.d_min = q.dmin;
  c.query.d_max = q.dmax;
  c.query.levels = q.levels > 0 && !xyz ? q.levels : 2;
  c.xyz_levels = q.levels > 0 && xyz ? q.levels : 3;
  c.xyz_n = q.n;
  c.query.validate();
  if (xyz && (q.n < 3 || q.n % 2 == 0)) throw ConfigError("--n must be odd and >= 3");
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

Json stats_json(const QueryStats& s) { return Json::parse(stats_to_json(s)); }

Json metrics_json(const MetricsReport& m) {
  return {{"p2s_cm", m.p2s_cm},
          {"inverse_p2s_cm", m.inverse_p2s_cm},
          {"chamfer_cm", m.chamfer_cm},
          {"normal_pointwise", m.normal_pointwise},
          {"samples", m.samples},
          {"seed", m.seed}};
}

// Surface the oracle describes, when the provider is an analytical one.
std::optional<LabeledMesh> oracle_ground_truth(const OccupancyProvider& provider, const TemplateModel& model) {
  const OccupancyProvider* p = &provider;
  if (const auto* stub = dynamic_cast<const StubProvider*>(p)) p = &stub->inner();
  if (const auto* oracle = dynamic_cast<const AnalyticalOracle*>(p))
    return displaced_template(model, oracle->field(), 4);
  if (const auto* sphere = dynamic_cast<const SphereOracle*>(p)) {
    SphereConfig sc;
    sc.center = sphere->center();
    sc.radius = sphere->radius();
    sc.segments = 256;
    sc.rings = 128;
    const TemplateModel s = generate_sphere_template(sc);
    LabeledMesh m = template_part_mesh(s, 0);
    std::fill(m.vertex_part.begin(), m.vertex_part.end(), -1);
    return m;
  }
  return std::nullopt;
}

std::string fmt(double v, int precision = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

// --- commands -----------------------------------------------------------------

struct AtlasCmd {
  TemplateArgs tmpl;
  std::string output;
  std::string save_template;
};

int run_atlas(const AtlasCmd& c, bool json) {
  const TemplateModel model = load_template_arg(c.tmpl);
  const PreparedTemplate prep = prepare_template(model, atlas_options(c.tmpl));
  save_atlas(prep.atlas, c.output);
  if (!c.save_template.empty()) {
    save_template(prep.model, c.save_template);
    save_manifest(manifest_of(prep.model), std::filesystem::path(c.save_template).replace_extension(".json"));
  }
  std::size_t visible = 0;
  for (const auto& pa : prep.atlas.parts)
    for (std::size_t i = 0; i < pa.mask.size(); ++i) visible += pa.mask[i] && pa.visible[i];
  if (json) {
    std::cout << Json{{"atlas", c.output},
                      {"parts", prep.atlas.part_count()},
                      {"width", prep.atlas.width},
                      {"height", prep.atlas.height},
                      {"masked_texels", prep.atlas.masked_count()},
                      {"original_texels", prep.atlas.masked_original_count()},
                      {"visible_texels", visible}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "atlas " << c.output << ": " << prep.atlas.part_count() << " parts at " << prep.atlas.width << "x"
              << prep.atlas.height << ", " << prep.atlas.masked_original_count() << " texels ("
              << prep.atlas.masked_count() << " after dilation), " << visible << " visible\n";
  }
  return 0;
}

struct ReconstructCmd {
  TemplateArgs tmpl;
  QueryArgs query;
  std::string rep = "iuvd-feedback";
  std::string atlas;
  std::string output;
  std::string stats;
  std::string volume;
  bool metrics = false;
  std::size_t samples = 10000;
};

int run_reconstruct(const ReconstructCmd& c, bool json) {
  const Representation rep = parse_representation(c.rep);
  if (!c.atlas.empty() && is_xyz(rep))
    throw ConfigError("--atlas only applies to IUVD representations, not " + c.rep);
  const PipelineConfig config = pipeline_config(c.query, is_xyz(rep));
  const TemplateModel model = load_template_arg(c.tmpl);
  auto provider = make_provider(c.query.provider, provider_context(model, c.query));

  PreparedTemplate prep;
  if (!c.atlas.empty()) {
    prep.model = scale_uv_charts(model, atlas_options(c.tmpl).uv_scale);
    prep.atlas = load_atlas(c.atlas);
    if (prep.atlas.part_count() != prep.model.part_count())
      throw ConfigError("atlas has " + std::to_string(prep.atlas.part_count()) + " parts, template has " +
                        std::to_string(prep.model.part_count()));
  } else {
    prep = prepare_template(model, atlas_options(c.tmpl));
  }
  std::unique_ptr<TriangleBvh> bvh;
  if (is_xyz(rep)) bvh = std::make_unique<TriangleBvh>(FlatMesh::from_template(prep.model));

  const RunResult r = run_representation(rep, prep, *provider, config, bvh.get());
  save_mesh(r.mesh, c.output);
  if (!c.stats.empty()) save_stats(r.stats, c.stats);
  if (!c.volume.empty()) {
    if (r.iuvd) save_volume(*r.iuvd, c.volume);
    if (r.xyz) save_xyz_volume(*r.xyz, c.volume);
  }
  std::optional<MetricsReport> metrics;
  if (c.metrics) {
    const auto gt = oracle_ground_truth(*provider, prep.model);
    if (!gt) throw ConfigError("--metrics needs an analytical oracle provider");
    metrics = evaluate_metrics(*gt, r.mesh, c.samples, c.query.seed);
  }

  if (json) {
    Json j{{"representation", to_string(rep)},
           {"provider", provider->name()},
           {"mesh", c.output},
           {"vertices", r.mesh.vertex_count()},
           {"faces", r.mesh.face_count()},
           {"stats", stats_json(r.stats)}};
    if (metrics) j["metrics"] = metrics_json(*metrics);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << to_string(rep) << " with " << provider->name() << "\n"
              << "  inferred " << r.stats.inferred_points << " of " << r.stats.total_points() << " points ("
              << fmt(100.0 * r.stats.inferred_points / std::max<std::uint64_t>(1, r.stats.total_points()), 1)
              << "%)\n"
              << "  query " << fmt(r.stats.query_ms) << " ms (sdf " << fmt(r.stats.sdf_ms) << ", inference "
              << fmt(r.stats.inference_ms) << "), extraction " << fmt(r.stats.extraction_ms) << " ms\n"
              << "  mesh " << c.output << ": " << r.mesh.vertex_count() << " vertices, " << r.mesh.face_count()
              << " faces\n";
    if (metrics)
      std::cout << "  P2S " << fmt(metrics->p2s_cm, 4) << " cm, Chamfer " << fmt(metrics->chamfer_cm, 4)
                << " cm, normal_pointwise " << fmt(metrics->normal_pointwise, 4) << "\n";
  }
  return 0;
}

struct BenchCmd {
  TemplateArgs tmpl;
  QueryArgs query;
  std::vector<std::string> reps{"all"};
  int repeats = 30;
  std::string output;
  std::string csv;
};

int run_bench(const BenchCmd& c, bool json) {
  BenchConfig config;
  config.reps.clear();
  for (const std::string& r : c.reps) {
    if (r == "all") {
      config.reps = all_representations();
      break;
    }
    config.reps.push_back(parse_representation(r));
  }
  config.repeats = c.repeats;
  config.pipeline = pipeline_config(c.query, false);
  config.pipeline.xyz_levels = c.query.levels > 0 ? c.query.levels : 3;
  if (c.query.n < 3 || c.query.n % 2 == 0) throw ConfigError("--n must be odd and >= 3");
  const TemplateModel model = load_template_arg(c.tmpl);
  auto provider = make_provider(c.query.provider, provider_context(model, c.query));
  const PreparedTemplate prep = prepare_template(model, atlas_options(c.tmpl));
  const BenchReport report = run_benchmark(prep, *provider, config);
  const std::string report_json = bench_to_json(report);
  if (!c.output.empty()) write_text(c.output, report_json + "\n");
  if (!c.csv.empty()) write_text(c.csv, bench_to_csv(report));
  if (json) {
    std::cout << report_json << '\n';
  } else {
    std::cout << "provider " << report.provider << ", " << report.repeats << " repeats, " << report.threads
              << " threads\n"
              << "IUVD " << report.parts << "x" << report.width << "x" << report.height << "x" << report.depth
              << " vs XYZ " << report.xyz_n << "^3: complexity ratio " << fmt(report.complexity_ratio, 4)
              << " (paper dimensions " << fmt(report.paper_complexity_ratio, 3) << ")\n";
    std::printf("%-14s %12s %12s %10s %12s %12s %10s\n", "representation", "inferred", "query+infer", "sdf",
                "inference", "extraction", "total");
    for (const BenchRow& row : report.rows) {
      if (!row.error.empty()) {
        std::printf("%-14s failed: %s\n", to_string(row.rep).c_str(), row.error.c_str());
        continue;
      }
      std::printf("%-14s %12llu %12.2f %10.2f %12.2f %12.2f %10.2f\n", to_string(row.rep).c_str(),
                  static_cast<unsigned long long>(row.inferred_points), row.query_and_infer_ms.median,
                  row.sdf_ms.median, row.inference_ms.median, row.extraction_ms.median, row.total_ms.median);
    }
    std::cout << "times are medians in ms\n";
  }
  for (const BenchRow& row : report.rows)
    if (!row.error.empty()) return 1;
  return 0;
}

struct MetricsCmd {
  std::string gt, pred;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

int run_metrics(const MetricsCmd& c, bool json) {
  const LabeledMesh gt = load_mesh(c.gt);
  const LabeledMesh pred = load_mesh(c.pred);
  const MetricsReport m = evaluate_metrics(gt, pred, c.samples, c.seed);
  if (json) {
    std::cout << metrics_json(m).dump(2) << '\n';
  } else {
    std::cout << "P2S " << fmt(m.p2s_cm, 4) << " cm, inverse P2S " << fmt(m.inverse_p2s_cm, 4) << " cm, Chamfer "
              << fmt(m.chamfer_cm, 4) << " cm, normal_pointwise " << fmt(m.normal_pointwise, 4) << " (" << m.samples
              << " samples, seed " << m.seed << ")\n";
  }
  return 0;
}

struct EditCmd {
  std::string a, b, output;
  int part = -1;
};

int run_edit(const EditCmd& c, bool json) {
  const LabeledMesh a = load_mesh(c.a);
  const LabeledMesh b = load_mesh(c.b);
  const LabeledMesh out = swap_part(a, b, c.part);
  save_mesh(out, c.output);
  if (json) {
    std::cout << Json{{"mesh", c.output}, {"vertices", out.vertex_count()}, {"faces", out.face_count()},
                      {"swapped_part", c.part}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "part " << c.part << " of " << c.a << " replaced from " << c.b << " -> " << c.output << " ("
              << out.vertex_count() << " vertices, " << out.face_count() << " faces)\n";
  }
  return 0;
}

struct ServeCmd {
  std::string provider = "oracle:const";
  std::string listen;
  std::size_t max_connections = 0;
  double ramp = 0.0;
};

int run_serve(const ServeCmd& c) {
  ProviderContext ctx;
  ctx.ramp_width = c.ramp;
  auto provider = make_provider(c.provider, ctx);
  if (c.listen.empty()) {
    serve_stream(*provider, 0, 1);
    return 0;
  }
  const auto colon = c.listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--listen expects host:port");
  int port = 0;
  try {
    port = std::stoi(c.listen.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("--listen expects host:port");
  }
  serve_tcp(*provider, c.listen.substr(0, colon), port, c.max_connections,
            [](int bound) { std::cerr << "listening on port " << bound << std::endl; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Part-based IUVD reconstruction: atlases, feedback queries, XYZ baselines, benchmarks."};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  bool json = false;
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", json, "machine-readable output on stdout");
  app.set_config("--config", "", "TOML or JSON (.json) config file; command-line flags take precedence");
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    const std::string next = argv[i + 1];
    if (arg == "--config" && next.size() > 5 && next.substr(next.size() - 5) == ".json")
      app.config_formatter(std::make_shared<JsonConfig>());
  }
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--config=", 0) == 0 && arg.size() > 14 && arg.substr(arg.size() - 5) == ".json")
      app.config_formatter(std::make_shared<JsonConfig>());
  }

  AtlasCmd atlas;
  auto* atlas_cmd = app.add_subcommand("atlas", "build an atlas (scale, rasterize, dilate, visibility)");
  add_template_options(atlas_cmd, atlas.tmpl);
  atlas_cmd->add_option("-o,--output", atlas.output, "atlas file (IUVA)")->required();
  atlas_cmd->add_option("--save-template", atlas.save_template, "also write the chart-scaled template OBJ");

  ReconstructCmd recon;
  auto* recon_cmd = app.add_subcommand("reconstruct", "query an occupancy provider and extract a mesh");
  add_template_options(recon_cmd, recon.tmpl);
  add_query_options(recon_cmd, recon.query);
  recon_cmd->add_option("--rep", recon.rep, "iuvd-full, iuvd-octree, iuvd-feedback, xyz-full, xyz-octree")
      ->capture_default_str();
  recon_cmd->add_option("--atlas", recon.atlas, "prebuilt atlas file (IUVD representations only)");
  recon_cmd->add_option("-o,--output", recon.output, "mesh file (.obj or .ply)")->required();
  recon_cmd->add_option("--stats", recon.stats, "query statistics JSON");
  recon_cmd->add_option("--volume", recon.volume, "dump the queried volume (IUVD or XYZV)");
  recon_cmd->add_flag("--metrics", recon.metrics, "compare against the oracle's ground-truth surface");
  recon_cmd->add_option("--samples", recon.samples, "metric samples")->check(CLI::Range(1000, 10000000));

  BenchCmd bench;
  auto* bench_cmd = app.add_subcommand("bench", "time representations end to end");
  add_template_options(bench_cmd, bench.tmpl);
  add_query_options(bench_cmd, bench.query);
  bench_cmd->add_option("--reps", bench.reps, "comma-separated representations or 'all'")->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "repeats per representation")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  bench_cmd->add_option("-o,--output", bench.output, "report JSON");
  bench_cmd->add_option("--csv", bench.csv, "report CSV");

  MetricsCmd metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "P2S, Chamfer and pointwise normal error between meshes");
  metrics_cmd->add_option("gt", metrics.gt, "ground-truth mesh")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("pred", metrics.pred, "predicted mesh")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--samples", metrics.samples, "surface samples")
      ->check(CLI::Range(1000, 10000000))
      ->capture_default_str();
  metrics_cmd->add_option("--seed", metrics.seed, "sampling seed")->capture_default_str();

  EditCmd edit;
  auto* edit_cmd = app.add_subcommand("edit", "replace one part of a mesh with the same part of another");
  edit_cmd->add_option("a", edit.a, "host mesh")->required()->check(CLI::ExistingFile);
  edit_cmd->add_option("b", edit.b, "donor mesh")->required()->check(CLI::ExistingFile);
  edit_cmd->add_option("--part", edit.part, "part index to swap")->required();
  edit_cmd->add_option("-o,--output", edit.output, "output mesh")->required();

  ServeCmd serve;
  auto* serve_cmd = app.add_subcommand("serve", "answer inference frames for a feature-only provider");
  serve_cmd->add_option("--provider", serve.provider, "provider to serve")->capture_default_str();
  serve_cmd->add_option("--listen", serve.listen, "host:port; stdin/stdout when omitted");
  serve_cmd->add_option("--max-connections", serve.max_connections, "stop after this many (0 = never)");
  serve_cmd->add_option("--ramp", serve.ramp, "oracle ramp half-width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(threads);
    if (atlas_cmd->parsed()) return run_atlas(atlas, json);
    if (recon_cmd->parsed()) return run_reconstruct(recon, json);
    if (bench_cmd->parsed()) return run_bench(bench, json);
    if (metrics_cmd->parsed()) return run_metrics(metrics, json);
    if (edit_cmd->parsed()) return run_edit(edit, json);
    if (serve_cmd->parsed()) return run_serve(serve);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
