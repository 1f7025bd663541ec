// rdvk: encode/decode, metrics, BD-rate and per-sequence competition over the
// RDV1 toolkit. Exit codes: 0 ok, 2 bad configuration, 3 bad stream, 4
// infeasible budget, 1 anything else.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdv/rdv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double wall_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

rdv::Rational parse_fps(const std::string& text) {
  std::size_t colon = text.find(':');
  try {
    if (colon == std::string::npos)
      return {static_cast<std::uint32_t>(std::stoul(text)), 1};
    return {static_cast<std::uint32_t>(std::stoul(text.substr(0, colon))),
            static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw rdv::ConfigError("bad --fps value: " + text);
  }
}

int effective_jobs(int flag_jobs) {
  if (const char* env = std::getenv("RDVK_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (flag_jobs > 0) return flag_jobs;
  return rdv::default_jobs();
}

rdv::Sequence load_input(const std::string& path, int width, int height,
                         const std::string& fps) {
  if (width > 0 || height > 0) {
    if (width <= 0 || height <= 0)
      throw rdv::ConfigError("raw input needs both --width and --height");
    return rdv::load_raw_i420(path, width, height, parse_fps(fps));
  }
  return rdv::load_y4m(path);
}

void dump_motion_jsonl(const rdv::SequenceEncodeResult& enc,
                       const rdv::FrameSchedule& schedule,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw rdv::IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < enc.motion.size(); ++i) {
    const rdv::MotionField& f = enc.motion[i];
    const rdv::ScheduleEntry& e = schedule.entries[i];
    json j;
    j["coding_order"] = e.coding_order;
    j["display_index"] = e.display_index;
    j["type"] = rdv::to_string(e.frame_type);
    if (f.block_count() > 0) {
      j["blocks_x"] = f.blocks_x;
      j["blocks_y"] = f.blocks_y;
      json past = json::array();
      for (const auto& mv : f.mv_past) past.push_back({mv.dx, mv.dy});
      j["mv_past"] = std::move(past);
      if (f.bidirectional()) {
        json fut = json::array();
        for (const auto& mv : f.mv_future) fut.push_back({mv.dx, mv.dy});
        j["mv_future"] = std::move(fut);
        json beta = json::array();
        for (auto b : f.beta_half) beta.push_back(static_cast<int>(b));
        j["beta_half"] = std::move(beta);
      }
    }
    out << j.dump() << "\n";
  }
}

json encode_stats_json(const rdv::Sequence& input,
                       const rdv::SequenceEncodeResult& enc) {
  json stats;
  stats["bits"] = enc.total_bits;
  double duration = input.duration_seconds();
  stats["bps"] = duration > 0 ? static_cast<double>(enc.total_bits) / duration : 0.0;
  try {
    double s = rdv::ms_ssim(input, enc.recon);
    stats["ms_ssim_db"] = rdv::ms_ssim_db(s);
  } catch (const rdv::DimensionError&) {
    stats["ms_ssim_db"] = nullptr;  // frames too small for 5-scale MS-SSIM
  }
  stats["psnr"] = rdv::psnr(input, enc.recon);
  return stats;
}

int cmd_encode(const std::string& in_path, const std::string& out_path,
               const rdv::CodingChoice& choice, int width, int height,
               const std::string& fps, const std::string& dump_schedule,
               const std::string& dump_motion) {
  rdv::Sequence input = load_input(in_path, width, height, fps);
  if (input.empty()) throw rdv::ConfigError("no frames in input");
  rdv::SequenceEncodeResult enc = rdv::encode_sequence(input, choice);

  int coded_frames = static_cast<int>(input.frames.size());
  rdv::FrameSchedule schedule =
      rdv::build_schedule(coded_frames, choice.intra_period, choice.gop_size);
  if (!dump_schedule.empty()) {
    std::ofstream out(dump_schedule, std::ios::trunc);
    if (!out) throw rdv::IoError("cannot open " + dump_schedule + " for writing");
    rdv::dump_schedule_jsonl(schedule, out);
  }
  if (!dump_motion.empty()) dump_motion_jsonl(enc, schedule, dump_motion);

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw rdv::IoError("cannot open " + out_path + " for writing");
  out.write(reinterpret_cast<const char*>(enc.stream.data()),
            static_cast<std::streamsize>(enc.stream.size()));
  out.flush();
  if (!out) throw rdv::IoError("write failure on " + out_path);

  std::cout << encode_stats_json(input, enc).dump() << "\n";
  return 0;
}

int cmd_decode(const std::string& in_path, const std::string& out_path) {
  auto t0 = std::chrono::steady_clock::now();
  rdv::Sequence decoded = rdv::decode_stream_file(in_path);
  double elapsed = wall_seconds(t0);
  rdv::store_y4m(decoded, out_path);
  json j;
  j["decode_time_s"] = elapsed;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_metrics(const std::string& ref_path, const std::string& dist_path) {
  rdv::Sequence ref = rdv::load_y4m(ref_path);
  rdv::Sequence dist = rdv::load_y4m(dist_path);
  double s = rdv::ms_ssim(ref, dist);
  json j;
  j["ms_ssim"] = s;
  j["ms_ssim_db"] = rdv::ms_ssim_db(s);
  j["psnr"] = rdv::psnr(ref, dist);
  std::cout << j.dump() << "\n";
  return 0;
}

std::vector<rdv::RdPoint> load_rd_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rdv::IoError("cannot open " + path);
  std::vector<rdv::RdPoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream row(line);
    double rate, quality;
    if (row >> rate >> quality) points.push_back({rate, quality});
    // non-numeric rows (headers) are skipped
  }
  if (points.empty()) throw rdv::ConfigError("no rate/quality rows in " + path);
  return points;
}

int cmd_bdrate(const std::string& anchor_path, const std::string& test_path) {
  std::vector<rdv::RdPoint> anchor = load_rd_csv(anchor_path);
  std::vector<rdv::RdPoint> test = load_rd_csv(test_path);
  double bd = rdv::bd_rate(anchor, test);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f\n", bd);
  std::cout << buf;
  return 0;
}

rdv::CandidateGrid parse_grid(const std::string& spec) {
  rdv::CandidateGrid grid;
  if (spec.empty()) return grid;
  auto parse_ints = [](const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
      if (!item.empty()) out.push_back(std::stoi(item));
    return out;
  };
  auto contains = [](const std::vector<int>& set, int v) {
    return std::find(set.begin(), set.end(), v) != set.end();
  };
  std::istringstream in(spec);
  std::string part;
  while (std::getline(in, part, ';')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw rdv::ConfigError("bad --grid term: " + part);
    std::string key = part.substr(0, eq);
    std::vector<int> values;
    try {
      values = parse_ints(part.substr(eq + 1));
    } catch (const std::exception&) {
      throw rdv::ConfigError("bad --grid values in: " + part);
    }
    if (values.empty()) throw rdv::ConfigError("empty --grid set: " + part);
    if (key == "ip") {
      for (int v : values)
        if (!contains(rdv::competition_intra_periods(), v))
          throw rdv::ConfigError("intra period outside {32,64,128,320}");
      grid.intra_periods = values;
    } else if (key == "gop") {
      for (int v : values)
        if (!contains(rdv::competition_gop_sizes(), v))
          throw rdv::ConfigError("gop size outside {1,2,4,8,16}");
      grid.gop_sizes = values;
    } else if (key == "q") {
      for (int v : values)
        if (v < 1 || v > 8) throw rdv::ConfigError("quality outside [1,8]");
      grid.qualities = values;
    } else if (key == "ds") {
      std::vector<bool> ds;
      for (int v : values) {
        if (v != 0 && v != 1) throw rdv::ConfigError("ds must be 0 or 1");
        ds.push_back(v == 1);
      }
      grid.downsample = ds;
    } else {
      throw rdv::ConfigError("unknown --grid key: " + key);
    }
  }
  return grid;
}

struct ReportRow {
  std::string name;
  rdv::CodingChoice choice;
  std::uint64_t bits = 0;
  double ms_ssim_db = 0.0;
  double psnr = 0.0;
  std::optional<double> decode_time_s;
};

void write_report_md(const std::vector<ReportRow>& rows, double lambda,
                     std::uint64_t budget_bits, std::uint64_t total_bits,
                     std::optional<double> decoder_mbytes,
                     const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw rdv::IoError("cannot open " + path + " for writing");
  char buf[256];

  out << "# Competition report\n\n";
  out << "| sequence | intra period | gop | quality | downsample | bits | "
         "MS-SSIM_dB | PSNR [dB] | decode [s] |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  double psnr_sum = 0.0, decode_sum = 0.0;
  bool have_times = true;
  for (const ReportRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.4f", r.ms_ssim_db);
    out << "| " << r.name << " | " << r.choice.intra_period << " | "
        << r.choice.gop_size << " | Q" << r.choice.quality << " | "
        << (r.choice.downsample ? "yes" : "no") << " | " << r.bits << " | "
        << buf;
    std::snprintf(buf, sizeof buf, "%.4f", r.psnr);
    out << " | " << buf << " | ";
    if (r.decode_time_s) {
      std::snprintf(buf, sizeof buf, "%.3f", *r.decode_time_s);
      out << buf;
      decode_sum += *r.decode_time_s;
    } else {
      out << "n/a";
      have_times = false;
    }
    out << " |\n";
    psnr_sum += r.psnr;
  }

  std::uint64_t total_check = 0;
  for (const ReportRow& r : rows) total_check += r.bits;
  out << "\n## Totals\n\n";
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(total_check) / 8e6);
  out << "- Data size: " << buf << " MBytes (" << total_check << " bits)\n";
  std::snprintf(buf, sizeof buf, "%.4f",
                rows.empty() ? 0.0 : psnr_sum / static_cast<double>(rows.size()));
  out << "- Mean PSNR: " << buf << " dB\n";
  if (have_times) {
    std::snprintf(buf, sizeof buf, "%.3f", decode_sum);
    out << "- Total decode time: " << buf << " s (wall clock, not "
           "deterministic)\n";
  } else {
    out << "- Total decode time: n/a\n";
  }
  if (budget_bits > 0) {
    std::snprintf(buf, sizeof buf, "%.4f",
                  100.0 * static_cast<double>(total_bits) /
                      static_cast<double>(budget_bits));
    out << "- Budget: " << budget_bits << " bits, used " << total_bits
        << " bits (" << buf << "%)\n";
    std::snprintf(buf, sizeof buf, "%.9g", lambda);
    out << "- Rate-constraint lambda: " << buf << "\n";
  }
  if (decoder_mbytes) {
    std::snprintf(buf, sizeof buf, "%.3f", *decoder_mbytes);
    out << "- Decoder binary size: " << buf
        << " MBytes (host binary; not comparable to model-based decoders)\n";
  }

  // Fig.-3-style tally of the selected options.
  out << "\n## Coding options selected\n\n";
  out << "| option | value | sequences |\n|---|---|---|\n";
  int ds_count = 0;
  std::map<int, int> ip_counts, q_counts;
  for (const ReportRow& r : rows) {
    ds_count += r.choice.downsample ? 1 : 0;
    ip_counts[r.choice.intra_period]++;
    q_counts[r.choice.quality]++;
  }
  out << "| downsampling | on | " << ds_count << " |\n";
  for (const auto& [ip, count] : ip_counts)
    out << "| intra period | " << ip << " | " << count << " |\n";
  for (const auto& [q, count] : q_counts)
    out << "| quality level | Q" << q << " | " << count << " |\n";
}

int cmd_compete(const std::string& in_dir, const std::string& out_dir,
                double budget_mbytes, double budget_bps,
                const std::string& grid_spec, int jobs) {
  std::vector<std::string> inputs;
  if (!fs::is_directory(in_dir))
    throw rdv::ConfigError(in_dir + " is not a directory");
  for (const auto& entry : fs::directory_iterator(in_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".y4m")
      inputs.push_back(entry.path().string());
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) throw rdv::ConfigError("no .y4m inputs in " + in_dir);
  if ((budget_mbytes <= 0) == (budget_bps <= 0))
    throw rdv::ConfigError("give exactly one of --budget-mbytes / --budget-bps");

  std::vector<rdv::Sequence> sequences;
  sequences.reserve(inputs.size());
  double total_duration = 0.0;
  for (const std::string& path : inputs) {
    sequences.push_back(rdv::load_y4m(path));
    total_duration += sequences.back().duration_seconds();
  }

  std::uint64_t budget_bits =
      budget_mbytes > 0
          ? static_cast<std::uint64_t>(budget_mbytes * 8e6)
          : static_cast<std::uint64_t>(budget_bps * total_duration);

  rdv::CandidateGrid grid = parse_grid(grid_spec);
  std::vector<rdv::CodingChoice> choices = grid.choices();
  int njobs = effective_jobs(jobs);
  std::vector<rdv::SequenceTable> tables =
      rdv::build_tables(sequences, choices, njobs);

  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "candidates.csv", std::ios::trunc);
    if (!csv) throw rdv::IoError("cannot write candidates.csv");
    rdv::write_candidates_csv(tables, csv);
  }

  rdv::CompetitionResult result = rdv::fit_budget(tables, budget_bits);

  // Re-encode the winners (deterministic), decode them back for timing/PSNR.
  json result_json;
  result_json["lambda"] = result.lambda;
  result_json["budget_bits"] = result.budget_bits;
  result_json["total_bits"] = result.total_bits;
  result_json["utilization"] =
      static_cast<double>(result.total_bits) / static_cast<double>(budget_bits);
  json seq_array = json::array();
  json timing_array = json::array();
  std::vector<ReportRow> rows;
  double total_decode = 0.0;
  for (std::size_t s = 0; s < tables.size(); ++s) {
    const rdv::CandidateEval& chosen =
        tables[s].candidates[result.selections[s].candidate_index];
    rdv::SequenceEncodeResult enc =
        rdv::encode_sequence(sequences[s], chosen.choice);
    std::string stream_path =
        (fs::path(out_dir) / (tables[s].name + ".rdv")).string();
    {
      std::ofstream out(stream_path, std::ios::binary | std::ios::trunc);
      if (!out) throw rdv::IoError("cannot write " + stream_path);
      out.write(reinterpret_cast<const char*>(enc.stream.data()),
                static_cast<std::streamsize>(enc.stream.size()));
    }
    auto t0 = std::chrono::steady_clock::now();
    rdv::Sequence decoded = rdv::decode_stream(enc.stream, tables[s].name);
    double decode_time = wall_seconds(t0);
    total_decode += decode_time;
    double seq_psnr = rdv::psnr(sequences[s], decoded);

    json row;
    row["name"] = tables[s].name;
    row["choice"] = {{"intra_period", chosen.choice.intra_period},
                     {"gop_size", chosen.choice.gop_size},
                     {"quality", chosen.choice.quality},
                     {"downsample", chosen.choice.downsample}};
    row["bits"] = chosen.bits;
    row["rate_bps"] = chosen.rate_bps;
    row["ms_ssim"] = chosen.ms_ssim;
    row["ms_ssim_db"] = chosen.ms_ssim_db;
    row["psnr"] = seq_psnr;
    row["j"] = result.selections[s].cost.j;
    seq_array.push_back(row);

    json timing;
    timing["name"] = tables[s].name;
    timing["decode_time_s"] = decode_time;
    timing_array.push_back(timing);

    rows.push_back({tables[s].name, chosen.choice, chosen.bits,
                    chosen.ms_ssim_db, seq_psnr, decode_time});
  }
  result_json["sequences"] = seq_array;

  json histogram;
  int ds_count = 0;
  std::map<std::string, int> ip_counts, q_counts;
  for (const ReportRow& r : rows) {
    ds_count += r.choice.downsample ? 1 : 0;
    ip_counts[std::to_string(r.choice.intra_period)]++;
    q_counts[std::to_string(r.choice.quality)]++;
  }
  histogram["downsample"] = ds_count;
  histogram["intra_period"] = ip_counts;
  histogram["quality"] = q_counts;
  result_json["histogram"] = histogram;

  {
    std::ofstream out(fs::path(out_dir) / "result.json", std::ios::trunc);
    if (!out) throw rdv::IoError("cannot write result.json");
    out << result_json.dump(2) << "\n";
  }

  std::optional<double> decoder_mbytes;
  std::error_code ec;
  auto sz = fs::file_size("/proc/self/exe", ec);
  if (!ec) decoder_mbytes = static_cast<double>(sz) / 1e6;
  {
    json timings;
    timings["sequences"] = timing_array;
    timings["total_decode_time_s"] = total_decode;
    if (decoder_mbytes) timings["decoder_binary_mbytes"] = *decoder_mbytes;
    std::ofstream out(fs::path(out_dir) / "timings.json", std::ios::trunc);
    if (!out) throw rdv::IoError("cannot write timings.json");
    out << timings.dump(2) << "\n";
  }

  write_report_md(rows, result.lambda, result.budget_bits, result.total_bits,
                  decoder_mbytes, (fs::path(out_dir) / "report.md").string());

  std::cout << result_json.dump() << "\n";
  return 0;
}

int cmd_report(const std::string& result_path, const std::string& timings_path,
               const std::string& out_path) {
  std::ifstream in(result_path);
  if (!in) throw rdv::IoError("cannot open " + result_path);
  json result = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (result.is_discarded())
    throw rdv::ParseError("malformed JSON in " + result_path);

  std::map<std::string, double> times;
  if (!timings_path.empty()) {
    std::ifstream tin(timings_path);
    if (!tin) throw rdv::IoError("cannot open " + timings_path);
    json timings = json::parse(tin, nullptr, false);
    if (timings.is_discarded())
      throw rdv::ParseError("malformed JSON in " + timings_path);
    for (const auto& t : timings.at("sequences"))
      times[t.at("name").get<std::string>()] = t.at("decode_time_s").get<double>();
  }

  std::vector<ReportRow> rows;
  for (const auto& row : result.at("sequences")) {
    ReportRow r;
    r.name = row.at("name").get<std::string>();
    const auto& c = row.at("choice");
    r.choice = {c.at("intra_period").get<int>(), c.at("gop_size").get<int>(),
                c.at("quality").get<int>(), c.at("downsample").get<bool>()};
    r.bits = row.at("bits").get<std::uint64_t>();
    r.ms_ssim_db = row.at("ms_ssim_db").get<double>();
    r.psnr = row.at("psnr").get<double>();
    auto it = times.find(r.name);
    if (it != times.end()) r.decode_time_s = it->second;
    rows.push_back(r);
  }
  write_report_md(rows, result.value("lambda", 0.0),
                  result.value("budget_bits", std::uint64_t{0}),
                  result.value("total_bits", std::uint64_t{0}), std::nullopt,
                  out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdvk video toolkit"};
  app.require_subcommand(1);

  // encode
  auto* enc = app.add_subcommand("encode", "encode a video into an .rdv stream");
  std::string enc_in, enc_out, enc_fps = "25", enc_dump_schedule, enc_dump_motion;
  rdv::CodingChoice choice;
  int enc_w = 0, enc_h = 0;
  enc->add_option("--in", enc_in, "input video (.y4m, or raw with --width/--height)")
      ->required();
  enc->add_option("--out", enc_out, "output .rdv path")->required();
  enc->add_option("--intra-period", choice.intra_period, "frames between I frames");
  enc->add_option("--gop", choice.gop_size, "frames between references (power of two)");
  enc->add_option("--quality", choice.quality, "quality level 1..8");
  enc->add_flag("--downsample", choice.downsample, "halve resolution before coding");
  enc->add_option("--width", enc_w, "raw input width");
  enc->add_option("--height", enc_h, "raw input height");
  enc->add_option("--fps", enc_fps, "raw input frame rate (N or N:D)");
  enc->add_option("--dump-schedule", enc_dump_schedule, "write the schedule as JSON lines");
  enc->add_option("--dump-motion", enc_dump_motion, "write coded motion as JSON lines");

  // decode
  auto* dec = app.add_subcommand("decode", "decode an .rdv stream to Y4M");
  std::string dec_in, dec_out;
  dec->add_option("--in", dec_in, "input .rdv")->required();
  dec->add_option("--out", dec_out, "output .y4m")->required();

  // metrics
  auto* met = app.add_subcommand("metrics", "MS-SSIM / PSNR between two videos");
  std::string met_ref, met_dist;
  met->add_option("--ref", met_ref, "reference .y4m")->required();
  met->add_option("--dist", met_dist, "distorted .y4m")->required();

  // bdrate
  auto* bdr = app.add_subcommand("bdrate", "Bjontegaard delta rate between two curves");
  std::string bdr_anchor, bdr_test;
  bdr->add_option("--anchor", bdr_anchor, "anchor CSV (rate,quality_db)")->required();
  bdr->add_option("--test", bdr_test, "test CSV (rate,quality_db)")->required();

  // compete
  auto* cmp = app.add_subcommand("compete",
                                 "per-sequence competition with budget fitting");
  std::string cmp_in_dir, cmp_out_dir = "compete_out", cmp_grid;
  double cmp_budget_mb = 0.0, cmp_budget_bps = 0.0;
  int cmp_jobs = 0;
  cmp->add_option("--in-dir", cmp_in_dir, "directory of .y4m inputs")->required();
  cmp->add_option("--out-dir", cmp_out_dir, "output directory");
  cmp->add_option("--budget-mbytes", cmp_budget_mb, "total budget in MBytes");
  cmp->add_option("--budget-bps", cmp_budget_bps, "mean bits/second budget");
  cmp->add_option("--grid", cmp_grid,
                  "subset grid, e.g. ip=32,64;gop=2,8;q=2,4,6,8;ds=0,1");
  cmp->add_option("--jobs", cmp_jobs, "worker threads (RDVK_THREADS overrides)");

  // report
  auto* rep = app.add_subcommand("report", "regenerate report.md from result.json");
  std::string rep_result, rep_timings, rep_out = "report.md";
  rep->add_option("--result", rep_result, "result.json from compete")->required();
  rep->add_option("--timings", rep_timings, "timings.json from compete");
  rep->add_option("--out", rep_out, "output markdown path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*enc)
      return cmd_encode(enc_in, enc_out, choice, enc_w, enc_h, enc_fps,
                        enc_dump_schedule, enc_dump_motion);
    if (*dec) return cmd_decode(dec_in, dec_out);
    if (*met) return cmd_metrics(met_ref, met_dist);
    if (*bdr) return cmd_bdrate(bdr_anchor, bdr_test);
    if (*cmp)
      return cmd_compete(cmp_in_dir, cmp_out_dir, cmp_budget_mb, cmp_budget_bps,
                         cmp_grid, cmp_jobs);
    if (*rep) return cmd_report(rep_result, rep_timings, rep_out);
  } catch (const rdv::BudgetError& e) {
    std::cerr << "budget error: " << e.what()
              << " (minimum achievable: " << e.min_achievable_bits << " bits)\n";
    return 4;
  } catch (const rdv::BitstreamError& e) {
    std::cerr << "stream error: " << e.what() << "\n";
    return 3;
  } catch (const rdv::TruncationError& e) {
    std::cerr << "stream error: " << e.what() << "\n";
    return 3;
  } catch (const rdv::VersionError& e) {
    std::cerr << "stream error: " << e.what() << "\n";
    return 3;
  } catch (const rdv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const rdv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rdv::RangeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rdv::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rdv::UnsupportedFormat& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rdv::OverlapError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rdv::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
