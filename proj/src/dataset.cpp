#include "treealign/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "treealign/error.hpp"

namespace treealign {

namespace fs = std::filesystem;
using nlohmann::json;

Dataset load_dataset(const fs::path& path) {
    const fs::path manifest = fs::is_directory(path) ? path / "manifest.json" : path;
    std::ifstream in(manifest);
    if (!in) throw InputError("cannot open dataset manifest " + manifest.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(manifest.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("measures") || !doc["measures"].is_array())
        throw InputError(manifest.string() + ": expected an object with a \"measures\" array");
    const bool default_weighted = doc.value("weighted", false);

    Dataset ds;
    ds.manifest_path = manifest;
    std::vector<int> labels;
    std::vector<double> targets;
    std::size_t with_label = 0, with_target = 0;
    const auto& entries = doc["measures"];
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const std::string where = manifest.string() + ": measure " + std::to_string(i);
        if (!e.is_object() || !e.contains("file") || !e["file"].is_string())
            throw InputError(where + ": missing \"file\"");
        const fs::path file = manifest.parent_path() / e["file"].get<std::string>();
        std::ifstream data(file);
        if (!data) throw InputError(where + ": cannot open " + file.string());
        const bool weighted = e.value("weighted", default_weighted);
        const std::string source = file.string();
        ds.measures.push_back(read_points(data, weighted, &source));
        try {
            if (e.contains("label") && !e["label"].is_null()) {
                labels.push_back(e["label"].get<int>());
                ++with_label;
            } else {
                labels.push_back(0);
            }
            if (e.contains("target") && !e["target"].is_null()) {
                targets.push_back(e["target"].get<double>());
                ++with_target;
            } else {
                targets.push_back(0.0);
            }
        } catch (const json::exception& ex) {
            throw InputError(where + ": " + ex.what());
        }
    }
    if (ds.measures.empty()) throw InputError(manifest.string() + ": no measures");
    if (with_label != 0 && with_label != ds.size())
        throw InputError(manifest.string() + ": labels must be given for every measure or none");
    if (with_target != 0 && with_target != ds.size())
        throw InputError(manifest.string() + ": targets must be given for every measure or none");
    if (with_label) ds.labels = std::move(labels);
    if (with_target) ds.targets = std::move(targets);
    return ds;
}

void write_dataset(const Dataset& ds, const fs::path& dir) {
    fs::create_directories(dir);
    json doc;
    doc["weighted"] = true;
    doc["measures"] = json::array();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "measure_%04zu.txt", i);
        std::ofstream out(dir / name);
        if (!out) throw InputError("cannot write " + (dir / name).string());
        write_points(out, ds.measures[i], true);
        json entry{{"file", name}};
        if (ds.labels) entry["label"] = (*ds.labels)[i];
        if (ds.targets) entry["target"] = (*ds.targets)[i];
        doc["measures"].push_back(entry);
    }
    std::ofstream out(dir / "manifest.json");
    if (!out) throw InputError("cannot write " + (dir / "manifest.json").string());
    out << doc.dump(2) << '\n';
}

}  // namespace treealign
