#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "shadowkit/data_io.hpp"

namespace shadowkit::io {

namespace {

struct TripletFiles {
  fs::path shadow;
  fs::path mask;
  fs::path free;
};

bool has_png_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

std::vector<std::string> png_names(const fs::path& dir) {
  std::vector<std::string> names;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_png_extension(entry.path())) {
      names.push_back(entry.path().filename().string());
    }
  }
  return names;
}

// Loads one triplet or appends the reason it could not be loaded.
void load_one(const std::string& id, const TripletFiles& files, LoadResult& result) {
  for (const auto& [role, path] : {std::pair{"shadow", &files.shadow}, std::pair{"mask", &files.mask},
                                   std::pair{"free", &files.free}}) {
    if (!fs::exists(*path)) {
      result.report.push_back({id, std::string("missing ") + role + " file '" + path->string() + "'"});
      return;
    }
  }
  try {
    Triplet t{read_png_rgb(files.shadow), read_png_mask(files.mask), read_png_rgb(files.free), id};
    t.validate();
    result.triplets.push_back(std::move(t));
  } catch (const std::exception& e) {
    result.report.push_back({id, e.what()});
  }
}

bool needs_quoting(const std::string& s) {
  return s.empty() || s.find_first_of("\t\r\n") != std::string::npos;
}

}  // namespace

void Triplet::validate() const {
  require_same_shape(shadow_img, mask, "triplet");
  require_same_shape(shadow_img, free_img, "triplet");
  shadow_img.validate();
  free_img.validate();
  mask.validate();
}

LoadResult load_triplets(const fs::path& root, Layout layout) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("dataset root '" + root.string() + "' is not a directory");

  std::map<std::string, TripletFiles> files;  // ordered by id
  if (layout == Layout::istd) {
    std::set<std::string> names;
    for (const char* sub : {"A", "B", "C"}) {
      for (auto& n : png_names(root / sub)) names.insert(n);
    }
    for (const auto& n : names) {
      files[fs::path(n).stem().string()] = {root / "A" / n, root / "B" / n, root / "C" / n};
    }
  } else {
    static constexpr const char* kSuffixes[] = {"_shadow", "_mask", "_free"};
    std::set<std::string> ids;
    for (const auto& n : png_names(root)) {
      const std::string stem = fs::path(n).stem().string();
      for (const char* suffix : kSuffixes) {
        const std::string s(suffix);
        if (stem.size() > s.size() && stem.ends_with(s)) ids.insert(stem.substr(0, stem.size() - s.size()));
      }
    }
    for (const auto& id : ids) {
      files[id] = {root / (id + "_shadow.png"), root / (id + "_mask.png"), root / (id + "_free.png")};
    }
  }

  LoadResult result;
  for (const auto& [id, f] : files) load_one(id, f, result);
  return result;
}

void write_manifest(const std::vector<TripletRef>& refs, const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
  out << kManifestHeader << '\n';
  for (const auto& r : refs) {
    for (const std::string* field : {&r.id, &r.shadow_path, &r.mask_path, &r.free_path}) {
      if (needs_quoting(*field)) {
        throw ValidationError("manifest field for '" + r.id + "' is empty or contains a tab/newline");
      }
    }
    out << r.id << '\t' << r.shadow_path << '\t' << r.mask_path << '\t' << r.free_path << '\t'
        << r.width << '\t' << r.height << '\n';
  }
  if (!out) throw IoError("error writing manifest '" + path.string() + "'");
}

std::vector<TripletRef> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest '" + path.string() + "'");
  std::vector<TripletRef> refs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kManifestHeader) {
        throw ValidationError("manifest line 1: expected header '" + std::string(kManifestHeader) + "'");
      }
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    auto fail = [&](const std::string& why) {
      return ValidationError("manifest line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 6) throw fail("expected 6 tab-separated fields, got " + std::to_string(fields.size()));
    TripletRef r{fields[0], fields[1], fields[2], fields[3], 0, 0};
    for (const std::string* f : {&r.id, &r.shadow_path, &r.mask_path, &r.free_path}) {
      if (f->empty()) throw fail("empty field");
    }
    try {
      std::size_t pos = 0;
      r.width = std::stoi(fields[4], &pos);
      if (pos != fields[4].size()) throw std::invalid_argument("trailing");
      r.height = std::stoi(fields[5], &pos);
      if (pos != fields[5].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw fail("width/height are not integers");
    }
    if (r.width < 1 || r.height < 1) throw fail("width/height must be positive");
    refs.push_back(std::move(r));
  }
  if (line_no == 0) throw ValidationError("manifest line 1: missing header");
  return refs;
}

LoadResult load_manifest(const fs::path& path) {
  const auto refs = read_manifest(path);
  const fs::path base = path.parent_path();
  LoadResult result;
  for (const auto& r : refs) {
    const std::size_t before = result.triplets.size();
    load_one(r.id, {base / r.shadow_path, base / r.mask_path, base / r.free_path}, result);
    if (result.triplets.size() > before) {
      const Triplet& t = result.triplets.back();
      if (t.shadow_img.width() != r.width || t.shadow_img.height() != r.height) {
        result.report.push_back({r.id, "dimensions differ from manifest record"});
        result.triplets.pop_back();
      }
    }
  }
  return result;
}

std::vector<TripletRef> save_triplets(const std::vector<Triplet>& triplets, const fs::path& dir) {
  std::vector<TripletRef> refs;
  for (const auto& t : triplets) {
    t.validate();
    const std::string name = t.id + ".png";
    write_png_rgb(dir / "A" / name, t.shadow_img);
    write_png_mask(dir / "B" / name, t.mask);
    write_png_rgb(dir / "C" / name, t.free_img);
    refs.push_back({t.id, "A/" + name, "B/" + name, "C/" + name, t.shadow_img.width(),
                    t.shadow_img.height()});
  }
  write_manifest(refs, dir / "manifest.txt");
  return refs;
}

}  // namespace shadowkit::io
