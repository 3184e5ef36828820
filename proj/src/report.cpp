#include "tweetlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tweetlab {

using nlohmann::json;

std::string format_p_value(double p) {
    if (p < 1e-12) return "<1e-12";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", p);
    return buf;
}

json metrics_to_json(const Metrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1_positive", m.f1_positive},
            {"f1_weighted", m.f1_weighted},
            {"precision_defined", m.precision_defined},
            {"recall_defined", m.recall_defined},
            {"confusion",
             {{"tp", m.confusion.tp},
              {"fp", m.confusion.fp},
              {"fn", m.confusion.fn},
              {"tn", m.confusion.tn}}}};
}

json cv_report_to_json(const CvReport& report) {
    json folds = json::array();
    for (const Metrics& m : report.per_fold) folds.push_back(metrics_to_json(m));
    return {{"mean", metrics_to_json(report.mean)}, {"folds", std::move(folds)}};
}

json chi2_to_json(const InteractionChi2& test) {
    return {{"kind", to_string(test.kind)},
            {"mode", test.mode == Chi2Mode::binary ? "binary" : "histogram"},
            {"statistic", test.result.statistic},
            {"df", test.result.df},
            {"p_value", test.result.p_value},
            {"p_value_display", format_p_value(test.result.p_value)},
            {"columns", test.column_labels},
            {"observed", test.observed}};
}

json histogram_to_json(const InteractionHistogram& h) {
    json full = json::array();
    for (const auto& [count, tweets] : h.full) {
        full.push_back({{"count", count}, {"tweets", tweets}});
    }
    return {{"kind", to_string(h.kind)},
            {"subset", to_string(h.subset)},
            {"bins", h.bins},
            {"full", std::move(full)}};
}

json label_distribution_to_json(const LabelDistribution& d) {
    return {{"none", d.none},
            {"hate", d.hate},
            {"racism", d.racism},
            {"sexism", d.sexism},
            {"total", d.total}};
}

json user_table_to_json(const UserTypeTable& t) {
    return {{"non_hate", t.non_hate},
            {"hate", t.hate()},
            {"racist", t.racist},
            {"sexist", t.sexist},
            {"racist_and_sexist", t.racist_and_sexist},
            {"total", t.total()}};
}

json ig_to_json(const std::vector<IGEntry>& entries) {
    json out = json::array();
    for (const IGEntry& e : entries) out.push_back({{"feature", e.feature}, {"ig", e.ig}});
    return out;
}

json ablation_to_json(const AblationReport& report) {
    json rows = json::array();
    for (const AblationRow& r : report.rows) {
        rows.push_back({{"removed", r.unit},
                        {"delta_accuracy", r.delta_accuracy},
                        {"delta_f1", r.delta_f1},
                        {"ablated", metrics_to_json(r.ablated_mean)}});
    }
    return {{"full", metrics_to_json(report.full_mean)}, {"rows", std::move(rows)}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string svg_log_bar_chart(const std::vector<std::pair<std::string, std::int64_t>>& bars,
                              const std::string& title) {
    const double width = std::max<std::size_t>(bars.size(), 1) * 8.0 + 80.0;
    const double height = 320.0;
    const double base_y = height - 40.0;
    const double plot_h = base_y - 40.0;
    double max_log = 1.0;
    for (const auto& [_, v] : bars) {
        max_log = std::max(max_log, std::log10(static_cast<double>(std::max<std::int64_t>(v, 1)) ) + 0.05);
    }
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<text x=\"10\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    svg << "<line x1=\"40\" y1=\"" << base_y << "\" x2=\"" << width - 20 << "\" y2=\"" << base_y
        << "\" stroke=\"black\"/>\n";
    double x = 42.0;
    for (const auto& [label, value] : bars) {
        double h = value > 0
                       ? (std::log10(static_cast<double>(value)) + 0.05) / max_log * plot_h
                       : 1.0;
        svg << "<rect x=\"" << x << "\" y=\"" << base_y - h
            << "\" width=\"6\" height=\"" << h << "\" fill=\"steelblue\"><title>" << label << ": "
            << value << "</title></rect>\n";
        x += 8.0;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tweetlab
