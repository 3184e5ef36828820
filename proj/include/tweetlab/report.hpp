#ifndef TWEETLAB_REPORT_HPP
#define TWEETLAB_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tweetlab/corpus.hpp"
#include "tweetlab/eval.hpp"

namespace tweetlab {

// p-values below 1e-12 print as "<1e-12" so reports stay comparable.
std::string format_p_value(double p);

nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json cv_report_to_json(const CvReport& report);
nlohmann::json chi2_to_json(const InteractionChi2& test);
nlohmann::json histogram_to_json(const InteractionHistogram& h);
nlohmann::json label_distribution_to_json(const LabelDistribution& d);
nlohmann::json user_table_to_json(const UserTypeTable& t);
nlohmann::json ig_to_json(const std::vector<IGEntry>& entries);
nlohmann::json ablation_to_json(const AblationReport& report);

void write_text_file(const std::string& path, const std::string& content);

// Bar chart with log-scaled y axis, one bar per entry.
std::string svg_log_bar_chart(const std::vector<std::pair<std::string, std::int64_t>>& bars,
                              const std::string& title);

}  // namespace tweetlab

#endif
