#pragma once

// Loader for the 40-day baseline regression fixture: per-day maximum
// ground-truth risk level, report count, and the baseline's daily score in
// whole percents (dashes would mark invalid days; the baseline has none).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "torcast/dates.hpp"
#include "torcast/risk.hpp"

namespace torcast::spc_fixture {

struct DayRow {
    Date date;
    RiskLevel gt_max = RiskLevel::pct0;
    int reports = 0;
    double tb = 0.0;  // fraction in [0, 1]
};

inline std::vector<DayRow> load() {
    std::ifstream f(std::string(TORCAST_FIXTURES_DIR) + "/spc_daily.tsv");
    if (!f) throw std::runtime_error("spc_daily.tsv fixture missing");
    std::vector<DayRow> rows;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string date_s, level_s, reports_s, tb_s;
        std::getline(ss, date_s, '\t');
        std::getline(ss, level_s, '\t');
        std::getline(ss, reports_s, '\t');
        std::getline(ss, tb_s, '\t');
        DayRow row;
        row.date = parse_date(date_s);
        row.gt_max = *parse_risk_label(level_s);
        row.reports = std::stoi(reports_s);
        row.tb = std::stod(tb_s) / 100.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace torcast::spc_fixture
