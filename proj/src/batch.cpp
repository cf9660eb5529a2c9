#include "skelforge/batch.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "skelforge/error.hpp"
#include "skelforge/json_io.hpp"

namespace skelforge {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

StageTimings median_timings(const std::vector<StageTimings>& runs) {
  auto col = [&runs](double StageTimings::*field) {
    std::vector<double> v;
    for (const StageTimings& t : runs) v.push_back(t.*field);
    return median(std::move(v));
  };
  return {col(&StageTimings::polygon), col(&StageTimings::sskel),   col(&StageTimings::clean),
          col(&StageTimings::boundeddp), col(&StageTimings::connect), col(&StageTimings::refine),
          col(&StageTimings::total)};
}

std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs) {
  std::vector<std::filesystem::path> files;
  for (const auto& in : inputs) {
    if (std::filesystem::is_directory(in)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
  f << text;
}

struct Processed {
  BatchRow row;
  Skeleton skeleton;
  std::vector<SimplePolygon> polygons;
};

Processed process_polygon(const Json& doc, const SceneConfig& config, int bench) {
  std::vector<Point> ring;
  for (const Json& p : doc) ring.push_back(point_from_json(p));

  Processed out;
  out.row.n_vertices = ring.size();
  std::vector<StageTimings> runs;
  for (int r = 0; r < bench; ++r) {
    StageTimings t;
    const auto start = Clock::now();
    SimplePolygon poly = SimplePolygon::from_any_orientation(ring);
    t.polygon = ms_since(start);
    PartBuild built = build_part(std::move(poly), config, &t);
    for (const auto& [id, jt] : built.skeleton.joints()) built.skeleton.joint(id).part = 0;
    const auto t0 = Clock::now();
    Skeleton skel = refine(std::move(built.skeleton), config.refine, {{0, built.polygon}}, config.bdp);
    t.refine = ms_since(t0);
    t.total = ms_since(start);
    runs.push_back(t);
    if (r + 1 == bench) {
      out.skeleton = std::move(skel);
      out.polygons = {std::move(built.polygon)};
    }
  }
  out.row.timings = median_timings(runs);
  return out;
}

Processed process_scene(const std::string& text, int bench) {
  Processed out;
  std::vector<StageTimings> runs;
  for (int r = 0; r < bench; ++r) {
    StageTimings t;
    const auto start = Clock::now();
    Scene scene = Scene::load(text);
    t.polygon = ms_since(start);
    const auto t0 = Clock::now();
    Skeleton skel = scene.assemble_global_skeleton(&t.refine);
    t.connect = ms_since(t0) - t.refine;
    t.total = ms_since(start);
    runs.push_back(t);
    if (r + 1 == bench) {
      out.row.n_vertices = 0;
      for (const Subpart& p : scene.parts()) {
        out.row.n_vertices += p.polygon.size();
        out.polygons.push_back(p.world_polygon());
      }
      out.skeleton = std::move(skel);
    }
  }
  out.row.timings = median_timings(runs);
  return out;
}

std::string csv_row(const BatchRow& r) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed;
  ss << r.name << ',' << r.n_vertices << ',' << r.timings.polygon << ',' << r.timings.sskel << ','
     << r.timings.clean << ',' << r.timings.boundeddp << ',' << r.timings.connect << ',' << r.timings.refine << ','
     << r.timings.total;
  return ss.str();
}

}  // namespace

std::string skeleton_svg(const Skeleton& skel, const std::vector<SimplePolygon>& polygons) {
  BoundingBox box{{1e300, 1e300}, {-1e300, -1e300}};
  auto grow = [&box](Point p) {
    box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y)};
    box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y)};
  };
  for (const SimplePolygon& poly : polygons) {
    for (const Point& v : poly.vertices()) grow(v);
  }
  for (const auto& [id, jt] : skel.joints()) grow(jt.position);
  if (box.min.x > box.max.x) box = {{0, 0}, {1, 1}};
  const double pad = 0.05 * std::max(1.0, box.diagonal());
  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.min.x - pad << ' ' << box.min.y - pad << ' '
     << box.max.x - box.min.x + 2 * pad << ' ' << box.max.y - box.min.y + 2 * pad << "\">\n";
  for (const SimplePolygon& poly : polygons) {
    ss << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (const Point& v : poly.vertices()) ss << v.x << ',' << v.y << ' ';
    ss << "\"/>\n";
  }
  for (const Bone& b : skel.bones()) {
    const Point a = skel.joint(b.from).position, c = skel.joint(b.to).position;
    ss << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << c.x << "\" y2=\"" << c.y
       << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& [id, jt] : skel.joints()) {
    ss << "<circle cx=\"" << jt.position.x << "\" cy=\"" << jt.position.y << "\" r=\"" << std::max(jt.radius, 0.0)
       << "\" fill=\"none\" stroke=\"gray\" stroke-width=\"0.5\"/>\n";
    ss << "<circle cx=\"" << jt.position.x << "\" cy=\"" << jt.position.y << "\" r=\"2\" fill=\"red\"/>\n";
  }
  ss << "</svg>\n";
  return ss.str();
}

BatchReport run_batch(const BatchOptions& options, std::ostream& diag) {
  BatchReport report;
  const int bench = std::max(1, options.bench);
  std::filesystem::create_directories(options.out_dir);

  for (const auto& file : expand_inputs(options.inputs)) {
    const std::string name = file.stem().string();
    try {
      const std::string text = read_file(file);
      Json doc;
      try {
        doc = Json::parse(text);
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
      }
      Processed p;
      if (doc.is_array()) {
        p = process_polygon(doc, options.config, bench);
      } else if (doc.is_object()) {
        p = process_scene(text, bench);
      } else {
        throw Error(ErrorCode::MalformedDocument, "expected a polygon array or a scene document");
      }
      p.row.name = name;
      Json out = {{"name", name}, {"skeleton", skeleton_to_json(p.skeleton)}};
      write_file(options.out_dir / (name + ".skeleton.json"), out.dump(2) + "\n");
      if (options.svg) write_file(options.out_dir / (name + ".svg"), skeleton_svg(p.skeleton, p.polygons));
      report.rows.push_back(std::move(p.row));
    } catch (const Error& e) {
      report.failures.push_back(file.string() + ": " + std::string(to_string(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      report.failures.push_back(file.string() + ": " + e.what());
    }
  }

  if (options.csv) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(*options.csv, ec);
    const bool fresh = ec || size == 0;
    std::ofstream csv(*options.csv, std::ios::app);
    if (!csv) {
      report.failures.push_back(options.csv->string() + ": cannot open CSV");
    } else {
      if (fresh) csv << kCsvHeader << '\n';
      for (const BatchRow& r : report.rows) csv << csv_row(r) << '\n';
    }
  }
  for (const std::string& f : report.failures) diag << "error: " << f << '\n';
  return report;
}

}  // namespace skelforge
