#include "rewards.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fmt_util.hpp"

namespace cohortsel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void parse_fail(std::size_t line, const std::string& column, const std::string& what) {
  throw std::runtime_error("replay csv line " + std::to_string(line) + ", column '" + column +
                           "': " + what);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

double pull(RewardSource& src, ArmId a, double s, RngStream& rng) {
  if (s < 1.0) throw std::logic_error("pull: information gain must be >= 1");
  return std::visit(
      overloaded{
          [&](GaussianSource& g) {
            return rng.normal(g.means.at(a), g.sigma / std::sqrt(s));
          },
          [&](ReplaySource& r) {
            if (s == 1.0) {
              const auto& v = r.samples.at(a);
              return v[rng.uniform_below(v.size())];
            }
            return rng.normal(r.mean.at(a), r.sigma / std::sqrt(s));
          },
          [&](ScriptedSource& q) {
            auto& queue = q.queue.at(a);
            if (queue.empty()) throw std::logic_error("scripted source: queue exhausted");
            const double r = queue.front();
            queue.pop_front();
            return r;
          }},
      src.model);
}

std::vector<double> Instance::truths() const {
  std::vector<double> u;
  u.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.truth) throw std::logic_error("instance: arm without true utility");
    u.push_back(*rec.truth);
  }
  return u;
}

bool Instance::has_truths() const {
  return std::all_of(records.begin(), records.end(),
                     [](const ArmRecord& r) { return r.truth.has_value(); });
}

std::vector<int> Instance::groups() const {
  std::vector<int> g;
  g.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.group) throw std::logic_error("instance: arm without group label");
    g.push_back(*rec.group);
  }
  return g;
}

int Instance::num_groups() const {
  int q = 0;
  for (const auto& rec : records) {
    if (rec.group) q = std::max(q, *rec.group + 1);
  }
  return q;
}

Instance generate_gaussian_instance(int n, double meta_mean, double meta_sd, double sigma,
                                    RngStream& rng, int num_groups) {
  if (n < 1) throw std::invalid_argument("generate_gaussian_instance: n must be >= 1");
  if (meta_sd < 0.0 || sigma < 0.0)
    throw std::invalid_argument("generate_gaussian_instance: negative scale");
  Instance inst;
  GaussianSource src;
  src.sigma = sigma;
  src.means.reserve(n);
  inst.records.reserve(n);
  for (ArmId a = 0; a < n; ++a) {
    // True utilities live in [0, 1]; rewards around them are not clipped.
    const double u = std::clamp(rng.normal(meta_mean, meta_sd), 0.0, 1.0);
    src.means.push_back(u);
    inst.records.push_back(ArmRecord{a, std::nullopt, u});
  }
  if (num_groups > 0) {
    for (ArmId a = 0; a < n; ++a)
      inst.records[a].group = static_cast<int>(rng.uniform_below(num_groups));
    for (int g = 0; g < num_groups; ++g) inst.group_labels.push_back("g" + std::to_string(g));
  }
  inst.source.model = std::move(src);
  return inst;
}

Instance parse_replay_csv(const std::string& text, double sigma) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw std::runtime_error("replay csv line 1: empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "arm_id,group,mean,samples")
    throw std::runtime_error("replay csv line 1: header must be 'arm_id,group,mean,samples'");

  struct Row {
    long id;
    std::string group;
    double mean;
    std::vector<double> samples;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4)
      throw std::runtime_error("replay csv line " + std::to_string(lineno) +
                               ": expected 4 columns, got " + std::to_string(fields.size()));
    Row row;
    if (!parse_long(fields[0], row.id)) parse_fail(lineno, "arm_id", "not an integer");
    row.group = fields[1];
    if (!parse_double(fields[2], row.mean)) parse_fail(lineno, "mean", "not a number");
    if (fields[3].empty()) parse_fail(lineno, "samples", "empty sample list");
    for (const auto& tok : split(fields[3], ';')) {
      double v;
      if (!parse_double(tok, v)) parse_fail(lineno, "samples", "not a number: '" + tok + "'");
      row.samples.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("replay csv: no data rows");

  const long n = static_cast<long>(rows.size());
  std::vector<bool> seen(n, false);
  for (const auto& row : rows) {
    if (row.id < 0 || row.id >= n)
      throw std::runtime_error("replay csv: arm_id " + std::to_string(row.id) +
                               " outside 0.." + std::to_string(n - 1));
    if (seen[row.id])
      throw std::runtime_error("replay csv: duplicate arm_id " + std::to_string(row.id));
    seen[row.id] = true;
  }

  Instance inst;
  inst.records.resize(n);
  ReplaySource src;
  src.sigma = sigma;
  src.samples.resize(n);
  src.mean.resize(n);
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
  for (const auto& row : rows) {
    ArmRecord rec;
    rec.id = static_cast<ArmId>(row.id);
    rec.truth = row.mean;
    if (!row.group.empty()) {
      // Group indices follow first appearance in id order.
      auto it = std::find(inst.group_labels.begin(), inst.group_labels.end(), row.group);
      if (it == inst.group_labels.end()) {
        inst.group_labels.push_back(row.group);
        it = std::prev(inst.group_labels.end());
      }
      rec.group = static_cast<int>(it - inst.group_labels.begin());
    }
    inst.records[row.id] = rec;
    src.mean[row.id] = row.mean;
    src.samples[row.id] = row.samples;
  }
  inst.source.model = std::move(src);
  return inst;
}

Instance load_replay_csv(const std::string& path, double sigma) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("replay csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_replay_csv(buf.str(), sigma);
}

std::string render_replay_csv(const Instance& inst) {
  const auto* src = std::get_if<ReplaySource>(&inst.source.model);
  if (!src) throw std::logic_error("render_replay_csv: instance has no replay source");
  std::string out = "arm_id,group,mean,samples\n";
  for (const auto& rec : inst.records) {
    out += std::to_string(rec.id);
    out += ',';
    if (rec.group) out += inst.group_labels.at(*rec.group);
    out += ',';
    out += format_double(src->mean[rec.id]);
    out += ',';
    const auto& samples = src->samples[rec.id];
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (i) out += ';';
      out += format_double(samples[i]);
    }
    out += '\n';
  }
  return out;
}

void save_replay_csv(const std::string& path, const Instance& inst) {
  const std::string text = render_replay_csv(inst);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("replay csv: cannot write " + path);
  out << text;
}

}  // namespace cohortsel
