#pragma once

#include "helixlab/chaos.hpp"
#include "helixlab/helix.hpp"
#include "helixlab/scan.hpp"

#include <json.hpp>

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace helixlab {

// --- JSON serialization (Reals as decimal strings)

nlohmann::json to_json(const HelixDescriptor& h);
nlohmann::json to_json(const SkidStats& s);
nlohmann::json to_json(const OrderPointFit& f);
nlohmann::json to_json(const DivergenceReport& r);
nlohmann::json to_json(const CoverageReport& r);
nlohmann::json to_json(const LsysTransitivityResult& r);
nlohmann::json to_json(const MutualAttractionReport& r);
nlohmann::json to_json(const AttractorClass& c);
nlohmann::json to_json(const std::vector<ScanRow>& rows);  // atlas

// --- CSV exporters (header always present, ',' separator, '.' decimal point)

void episodes_csv(const SkidStats& s, std::ostream& os);          // start,end,laminar_gap
void divergence_csv(const DivergenceReport& r, std::ostream& os); // n,u_a,u_b,diff
void sweep_csv(const std::vector<ScanRow>& rows, std::ostream& os);
    // b,class,period,increment,mean_laminar,evidence

// --- Run manifests

std::string sha256_file(const std::string& path);  // lowercase hex

struct RunManifest {
    std::string version;
    std::string command;
    std::map<std::string, std::string> config;  // fully resolved
    std::string started_at, finished_at;        // ISO 8601 UTC
    struct Output {
        std::string path;
        std::string sha256;
    };
    std::vector<Output> outputs;

    void add_output(const std::string& path);  // digests the file now
    nlohmann::json to_json() const;
    void write(const std::string& path) const;
};

std::string iso8601_now();

}  // namespace helixlab
