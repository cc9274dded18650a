// Copyright 2026 The Dexmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dexmap — batch CLI for the grasp annotation pipeline. Every subcommand is
// a thin wrapper over one library operation; data goes to --out or stdout,
// diagnostics go to stderr, and identical inputs always produce
// byte-identical outputs.
//
// Exit codes: 0 success, 1 input/parse errors, 2 numerical failures.

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dexmap/annotate.hpp"
#include "dexmap/contacts_io.hpp"
#include "dexmap/dataset.hpp"
#include "dexmap/errors.hpp"
#include "dexmap/force_closure.hpp"
#include "dexmap/profile.hpp"
#include "dexmap/stage_io.hpp"
#include "dexmap/stream_io.hpp"

namespace {

struct Config {
  std::string in_path;
  std::string out_path;
  std::string profile_path;
  std::string manifest_path;
  std::string pred_path;
  std::string truth_path;
  std::string pred_points_path;
  std::string truth_points_path;
  std::string object_id;
  std::string category;
  std::string contacts_path;
  std::string finger = "index";
  std::string ratio;
  std::string lambda = "1,1,1";
  std::uint64_t seed = 0;
  double mu = 0.5;
  double tol = 1e-9;
  double ridge = 0.0;
  int edges = dexmap::kDefaultConeEdges;
  int jobs = 1;
};

// Data sink: --out file when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw dexmap::InputError("cannot open output file: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw dexmap::InputError("cannot open input file: " + path);
  }
  return in;
}

Eigen::Vector3d parse_lambda(const std::string& s) {
  Eigen::Vector3d lambda;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = s.find(',', pos);
    const std::string part =
        s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      lambda(i) = std::stod(part);
    } catch (const std::exception&) {
      throw dexmap::InputError("--lambda expects three comma-separated "
                               "numbers, got '" + s + "'");
    }
    if (comma == std::string::npos && i < 2) {
      throw dexmap::InputError("--lambda expects three comma-separated "
                               "numbers, got '" + s + "'");
    }
    pos = comma + 1;
  }
  return lambda;
}

std::pair<double, double> parse_ratio(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos) {
    throw dexmap::InputError("--ratio expects train:test, e.g. 8.5:1.5");
  }
  try {
    const double train = std::stod(s.substr(0, colon));
    const double test = std::stod(s.substr(colon + 1));
    if (train < 0.0 || test < 0.0 || train + test <= 0.0) {
      throw dexmap::InputError("--ratio weights must be non-negative and "
                               "not both zero");
    }
    return {train, test};
  } catch (const std::invalid_argument&) {
    throw dexmap::InputError("--ratio expects train:test, e.g. 8.5:1.5");
  }
}

int run_angles(const Config& cfg) {
  auto in = open_input(cfg.in_path);
  const dexmap::KeypointStream stream = dexmap::read_keypoint_stream(in);
  Output out(cfg.out_path);
  const auto layout = dexmap::HandSkeletonLayout::standard();

  std::size_t emitted = 0;
  for (const auto& e : stream.errors) {
    std::cerr << "angles: skipped: " << e << "\n";
  }
  for (const auto& sf : stream.frames) {
    try {
      const dexmap::HumanHandAngles angles =
          dexmap::extract_angles(sf.frame, layout);
      out.stream() << dexmap::angles_line(sf.frame.frame_index, angles)
                   << "\n";
      ++emitted;
    } catch (const dexmap::InputError& e) {
      std::cerr << "angles: skipped frame " << sf.frame.frame_index << ": "
                << e.what() << "\n";
    }
  }
  std::cerr << "angles: " << stream.data_lines << " frame(s) in, " << emitted
            << " emitted\n";
  if (stream.data_lines > 0 && stream.frames.empty()) return 1;
  return 0;
}

int run_retarget(const Config& cfg) {
  const dexmap::HandProfile profile =
      dexmap::load_hand_profile(cfg.profile_path);
  auto in = open_input(cfg.in_path);
  const dexmap::IndexedVectorFile file =
      dexmap::read_indexed_vectors(in, "angles");
  Output out(cfg.out_path);

  for (const auto& e : file.errors) {
    std::cerr << "retarget: skipped: " << e << "\n";
  }
  std::size_t emitted = 0;
  for (const auto& row : file.rows) {
    try {
      const auto human = dexmap::HumanHandAngles::from_flat(row.values);
      const auto outcome = dexmap::retarget_with_limits(profile, human);
      out.stream() << dexmap::retarget_line(row.frame_index, outcome, profile)
                   << "\n";
      ++emitted;
    } catch (const dexmap::InputError& e) {
      std::cerr << "retarget: skipped frame " << row.frame_index << ": "
                << e.what() << "\n";
    }
  }
  if (file.data_lines > 0 && file.rows.empty()) return 1;
  return 0;
}

int run_fit_map(const Config& cfg) {
  auto in = open_input(cfg.in_path);
  const dexmap::CalibrationPairsFile file =
      dexmap::read_calibration_pairs(in);
  for (const auto& e : file.errors) {
    std::cerr << "fit-map: skipped: " << e << "\n";
  }

  dexmap::CalibrationSet cal;
  cal.samples = file.pairs;
  const dexmap::FitResult fit = dexmap::fit_mapping(cal, cfg.ridge);
  Output out(cfg.out_path);
  out.stream() << dexmap::fit_result_json(cfg.finger, fit) << "\n";
  std::cerr << "fit-map: " << file.pairs.size() << " sample(s), rms error "
            << fit.rms_error << " rad\n";
  return 0;
}

int run_actuate(const Config& cfg) {
  const dexmap::HandProfile profile =
      dexmap::load_hand_profile(cfg.profile_path);
  if (!profile.coupling) {
    throw dexmap::InputError("profile '" + profile.hand_id +
                             "' declares no coupling matrix");
  }
  auto in = open_input(cfg.in_path);
  const dexmap::IndexedVectorFile file = dexmap::read_indexed_vectors(in, "q");
  Output out(cfg.out_path);

  for (const auto& e : file.errors) {
    std::cerr << "actuate: skipped: " << e << "\n";
  }
  for (const auto& row : file.rows) {
    try {
      const auto cmd =
          dexmap::joints_to_actuators(row.values, *profile.coupling);
      out.stream() << dexmap::actuate_line(row.frame_index, cmd,
                                           *profile.coupling)
                   << "\n";
    } catch (const dexmap::InputError& e) {
      std::cerr << "actuate: skipped frame " << row.frame_index << ": "
                << e.what() << "\n";
    }
  }
  if (file.data_lines > 0 && file.rows.empty()) return 1;
  return 0;
}

int run_fc_check(const Config& cfg) {
  auto in = open_input(cfg.in_path);
  const dexmap::ContactFile file = dexmap::read_contact_sets(in, cfg.mu);
  Output out(cfg.out_path);

  for (const auto& e : file.errors) {
    std::cerr << "fc-check: skipped: " << e << "\n";
  }
  for (const auto& set : file.sets) {
    try {
      const auto verdict = dexmap::check_force_closure(
          dexmap::grasp_matrix(set.contacts, cfg.edges), cfg.tol);
      out.stream() << dexmap::verdict_line(set.grasp_id, verdict) << "\n";
    } catch (const dexmap::InputError& e) {
      std::cerr << "fc-check: skipped grasp " << set.grasp_id << ": "
                << e.what() << "\n";
    }
  }
  if (!file.errors.empty() && file.sets.empty()) return 1;
  return 0;
}

int run_annotate(const Config& cfg) {
  const dexmap::HandProfile profile =
      dexmap::load_hand_profile(cfg.profile_path);
  auto in = open_input(cfg.in_path);
  const dexmap::KeypointStream stream = dexmap::read_keypoint_stream(in);

  std::optional<dexmap::FrameContacts> contacts;
  if (!cfg.contacts_path.empty()) {
    auto cin_file = open_input(cfg.contacts_path);
    const dexmap::ContactFile file =
        dexmap::read_contact_sets(cin_file, cfg.mu);
    for (const auto& e : file.errors) {
      std::cerr << "annotate: contacts: " << e << "\n";
    }
    contacts.emplace();
    for (const auto& set : file.sets) {
      std::int64_t frame = 0;
      const auto& id = set.grasp_id;
      const auto [ptr, ec] =
          std::from_chars(id.data(), id.data() + id.size(), frame);
      if (ec != std::errc() || ptr != id.data() + id.size()) {
        std::cerr << "annotate: contacts: grasp_id '" << id
                  << "' is not a frame index; entry ignored\n";
        continue;
      }
      (*contacts)[frame] = set.contacts;
    }
  }

  dexmap::AnnotateOptions opts;
  opts.cone_edges = cfg.edges;
  opts.closure_tol = cfg.tol;
  opts.jobs = cfg.jobs;
  const dexmap::ObjectMeta meta{cfg.object_id, cfg.category};
  const dexmap::AnnotateResult result = dexmap::annotate_stream(
      stream, profile, meta, contacts ? &*contacts : nullptr, opts);

  Output out(cfg.out_path);
  for (const auto& r : result.records) {
    out.stream() << dexmap::grasp_record_line(r) << "\n";
  }
  for (const auto& s : result.skipped) {
    std::cerr << "annotate: skipped: " << s << "\n";
  }
  for (const auto& d : result.diagnostics) {
    std::cerr << "annotate: note: " << d << "\n";
  }
  std::cerr << "annotate: " << result.input_frames << " frame(s) in, "
            << result.records.size() << " record(s), "
            << result.skipped.size() << " skipped\n";
  if (stream.data_lines > 0 && stream.frames.empty()) return 1;
  return 0;
}

int run_split(const Config& cfg) {
  dexmap::DatasetManifest manifest = dexmap::load_manifest(cfg.manifest_path);
  if (!cfg.ratio.empty()) {
    std::tie(manifest.train_weight, manifest.test_weight) =
        parse_ratio(cfg.ratio);
  }
  const dexmap::SplitResult split = dexmap::split_dataset(manifest, cfg.seed);
  for (const auto& w : split.warnings) {
    std::cerr << "split: " << w << "\n";
  }

  std::map<std::string, bool> in_train;
  for (const auto& id : split.train) in_train[id] = true;
  for (const auto& id : split.test) in_train[id] = false;

  Output out(cfg.out_path);
  for (const auto& o : manifest.objects) {
    out.stream() << dexmap::split_line(o.id, o.category, in_train[o.id])
                 << "\n";
  }
  std::cerr << "split: " << split.train.size() << " train / "
            << split.test.size() << " test\n";
  return 0;
}

int run_eval(const Config& cfg) {
  const Eigen::Vector3d lambda = parse_lambda(cfg.lambda);
  auto pred_in = open_input(cfg.pred_path);
  auto truth_in = open_input(cfg.truth_path);
  const dexmap::RecordReadResult pred = dexmap::read_grasp_records(pred_in);
  const dexmap::RecordReadResult truth = dexmap::read_grasp_records(truth_in);
  for (const auto& issue : pred.issues) {
    std::cerr << "eval: pred: " << issue << "\n";
  }
  for (const auto& issue : truth.issues) {
    std::cerr << "eval: truth: " << issue << "\n";
  }
  if (pred.malformed > 0 || truth.malformed > 0) {
    throw dexmap::InputError("eval: malformed record lines; refusing to "
                             "compute metrics on partial data");
  }
  if (pred.records.size() != truth.records.size()) {
    throw dexmap::InputError("eval: record counts differ (" +
                             std::to_string(pred.records.size()) + " vs " +
                             std::to_string(truth.records.size()) + ")");
  }

  std::vector<std::vector<Eigen::Vector3d>> pred_points, truth_points;
  if (!cfg.pred_points_path.empty() || !cfg.truth_points_path.empty()) {
    if (cfg.pred_points_path.empty() || cfg.truth_points_path.empty()) {
      throw dexmap::InputError("eval: --pred-points and --truth-points must "
                               "be given together");
    }
    auto pp = open_input(cfg.pred_points_path);
    auto tp = open_input(cfg.truth_points_path);
    const auto ps = dexmap::read_keypoint_stream(pp);
    const auto ts = dexmap::read_keypoint_stream(tp);
    if (!ps.errors.empty() || !ts.errors.empty() ||
        ps.frames.size() != pred.records.size() ||
        ts.frames.size() != truth.records.size()) {
      throw dexmap::InputError("eval: keypoint streams must parse cleanly "
                               "and match the record count");
    }
    for (const auto& f : ps.frames) {
      pred_points.emplace_back(f.frame.points.begin(), f.frame.points.end());
    }
    for (const auto& f : ts.frames) {
      truth_points.emplace_back(f.frame.points.begin(), f.frame.points.end());
    }
  }

  Output out(cfg.out_path);
  double sum_r = 0, sum_t = 0, sum_j = 0, sum_agg = 0, sum_kp = 0;
  for (std::size_t i = 0; i < pred.records.size(); ++i) {
    dexmap::GraspEvalReport report =
        dexmap::grasp_l1_error(pred.records[i], truth.records[i], lambda);
    if (!pred_points.empty()) {
      report.keypoint_l1 =
          dexmap::keypoint_recon_l1(pred_points[i], truth_points[i]);
      sum_kp += *report.keypoint_l1;
    }
    sum_r += report.rotation_l1;
    sum_t += report.translation_l1;
    sum_j += report.joints_l1;
    sum_agg += report.aggregate;
    out.stream() << dexmap::eval_line(i, report) << "\n";
  }

  const double n = std::max<std::size_t>(pred.records.size(), 1);
  std::string summary = "{\"summary\":{\"count\":";
  summary += std::to_string(pred.records.size());
  summary += ",\"mean_rotation_l1\":";
  summary += dexmap::jsonl::format_double(sum_r / n);
  summary += ",\"mean_translation_l1\":";
  summary += dexmap::jsonl::format_double(sum_t / n);
  summary += ",\"mean_joints_l1\":";
  summary += dexmap::jsonl::format_double(sum_j / n);
  summary += ",\"mean_aggregate\":";
  summary += dexmap::jsonl::format_double(sum_agg / n);
  if (!pred_points.empty()) {
    summary += ",\"mean_keypoint_l1\":";
    summary += dexmap::jsonl::format_double(sum_kp / n);
  }
  summary += "}}";
  out.stream() << summary << "\n";
  return 0;
}

int run_stats(const Config& cfg) {
  const dexmap::DatasetManifest manifest =
      dexmap::load_manifest(cfg.manifest_path);
  auto in = open_input(cfg.in_path);
  const dexmap::RecordReadResult records = dexmap::read_grasp_records(in);
  for (const auto& issue : records.issues) {
    std::cerr << "stats: " << issue << "\n";
  }
  const dexmap::DatasetStats stats =
      dexmap::dataset_stats(records.records, manifest, records.malformed);
  Output out(cfg.out_path);
  out.stream() << dexmap::dataset_stats_json(stats) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dexmap: keypoint streams to validated robot grasp annotations\n"
      "Pipeline stages compose over line-delimited JSON; diagnostics go to "
      "stderr, data to --out or stdout."};
  app.require_subcommand(1);

  Config cfg;

  auto add_common_numeric = [&cfg](CLI::App* cmd) {
    cmd->add_option("--mu", cfg.mu,
                    "default friction coefficient (dimensionless, >= 0) for "
                    "contacts without their own")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--edges", cfg.edges,
                    "friction cone edge count (dimensionless, >= 3)")
        ->check(CLI::Range(3, 1024));
    cmd->add_option("--tol", cfg.tol,
                    "force-closure interior tolerance on the normalized "
                    "margin (dimensionless, > 0)")
        ->check(CLI::PositiveNumber);
  };

  auto* angles = app.add_subcommand(
      "angles", "keypoint stream (pixels+meters or meters) -> 20 human joint "
                "angles (radians) per frame");
  angles->add_option("--in", cfg.in_path, "keypoint stream, JSONL")
      ->required();
  angles->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* retarget = app.add_subcommand(
      "retarget", "human joint angles (radians) -> robot joint angles "
                  "(radians) through a hand profile");
  retarget->add_option("--in", cfg.in_path, "angles file, JSONL")->required();
  retarget->add_option("--profile", cfg.profile_path, "hand profile JSON")
      ->required();
  retarget->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* fit_map = app.add_subcommand(
      "fit-map", "least-squares fit of one finger's mapping block from "
                 "calibration pairs (radians)");
  fit_map->add_option("--in", cfg.in_path,
                      "calibration pairs {human, robot}, JSONL")
      ->required();
  fit_map->add_option("--finger", cfg.finger,
                      "finger name the pairs belong to (label only)");
  fit_map->add_option("--ridge", cfg.ridge,
                      "ridge regularization weight (dimensionless, >= 0)")
      ->check(CLI::NonNegativeNumber);
  fit_map->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* actuate = app.add_subcommand(
      "actuate", "robot joint angles (radians) -> actuator commands via the "
                 "coupling pseudoinverse");
  actuate->add_option("--in", cfg.in_path, "joint vectors file, JSONL")
      ->required();
  actuate->add_option("--profile", cfg.profile_path, "hand profile JSON")
      ->required();
  actuate->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* fc_check = app.add_subcommand(
      "fc-check", "force-closure verdicts for contact sets (points in "
                  "meters, unit normals)");
  fc_check->add_option("--in", cfg.in_path, "contact sets, JSONL")->required();
  add_common_numeric(fc_check);
  fc_check->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* annotate = app.add_subcommand(
      "annotate", "full pipeline: keypoint stream -> validated grasp "
                  "records");
  annotate->add_option("--in", cfg.in_path, "keypoint stream, JSONL")
      ->required();
  annotate->add_option("--profile", cfg.profile_path, "hand profile JSON")
      ->required();
  annotate->add_option("--object", cfg.object_id, "object id for the records")
      ->required();
  annotate->add_option("--category", cfg.category,
                       "object category for the records")
      ->required();
  annotate->add_option("--contacts", cfg.contacts_path,
                       "per-frame contact sets, JSONL (grasp_id = frame "
                       "index); omit for unvalidated records");
  add_common_numeric(annotate);
  annotate->add_option("--jobs", cfg.jobs,
                       "parallel frame workers (output order is unaffected)")
      ->check(CLI::Range(1, 256));
  annotate->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* split = app.add_subcommand(
      "split", "deterministic stratified train/test split of a manifest");
  split->add_option("--manifest", cfg.manifest_path, "dataset manifest JSON")
      ->required();
  split->add_option("--seed", cfg.seed, "split seed (integer)");
  split->add_option("--ratio", cfg.ratio,
                    "train:test weights, e.g. 8.5:1.5 (default from "
                    "manifest)");
  split->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* eval = app.add_subcommand(
      "eval", "L1 grasp errors (rotation, translation, joints) between "
              "prediction and truth record files");
  eval->add_option("--pred", cfg.pred_path, "predicted records, JSONL")
      ->required();
  eval->add_option("--truth", cfg.truth_path, "ground-truth records, JSONL")
      ->required();
  eval->add_option("--lambda", cfg.lambda,
                   "weights r,t,j for the aggregate (dimensionless)");
  eval->add_option("--pred-points", cfg.pred_points_path,
                   "predicted keypoint stream for the reconstruction L1 "
                   "(meters)");
  eval->add_option("--truth-points", cfg.truth_points_path,
                   "ground-truth keypoint stream (meters)");
  eval->add_option("--out", cfg.out_path, "output path (default stdout)");

  auto* stats = app.add_subcommand(
      "stats", "per-category and per-hand counts plus closure pass-rate of a "
               "record file");
  stats->add_option("--in", cfg.in_path, "grasp records, JSONL")->required();
  stats->add_option("--manifest", cfg.manifest_path, "dataset manifest JSON")
      ->required();
  stats->add_option("--out", cfg.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(angles)) return run_angles(cfg);
    if (app.got_subcommand(retarget)) return run_retarget(cfg);
    if (app.got_subcommand(fit_map)) return run_fit_map(cfg);
    if (app.got_subcommand(actuate)) return run_actuate(cfg);
    if (app.got_subcommand(fc_check)) return run_fc_check(cfg);
    if (app.got_subcommand(annotate)) return run_annotate(cfg);
    if (app.got_subcommand(split)) return run_split(cfg);
    if (app.got_subcommand(eval)) return run_eval(cfg);
    if (app.got_subcommand(stats)) return run_stats(cfg);
  } catch (const dexmap::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dexmap::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
