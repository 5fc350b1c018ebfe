#include "icenet/metrics.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace icenet {

EvalReport evaluate(const std::vector<std::pair<int, int>>& predictions) {
    if (predictions.empty()) throw ContractError("evaluate: empty prediction list");
    EvalReport r;
    for (auto [pred, actual] : predictions) {
        if (pred == 1 && actual == 1) ++r.tp;
        else if (pred == 1 && actual == 0) ++r.fp;
        else if (pred == 0 && actual == 1) ++r.fn;
        else ++r.tn;
    }
    if (r.tp + r.fp > 0) {
        r.precision = static_cast<double>(r.tp) / (r.tp + r.fp);
    } else {
        ++r.undefined_metric_warnings;
    }
    if (r.tp + r.fn > 0) {
        r.recall = static_cast<double>(r.tp) / (r.tp + r.fn);
    } else {
        ++r.undefined_metric_warnings;
    }
    if (r.precision + r.recall > 0)
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

namespace {
std::pair<double, double> mean_std(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (xs.size() - 1))};
}
}  // namespace

EvalReport aggregate(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw ContractError("aggregate: no reports");
    std::vector<double> ps, rs, fs;
    EvalReport out;
    for (const auto& r : reports) {
        ps.push_back(r.precision);
        rs.push_back(r.recall);
        fs.push_back(r.f1);
        out.tp += r.tp;
        out.fp += r.fp;
        out.fn += r.fn;
        out.tn += r.tn;
    }
    std::tie(out.precision, out.precision_std) = mean_std(ps);
    std::tie(out.recall, out.recall_std) = mean_std(rs);
    std::tie(out.f1, out.f1_std) = mean_std(fs);
    out.runs = reports;
    return out;
}

std::string metrics_row(const EvalReport& r, bool with_std) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed;
    if (with_std) {
        os << r.precision << "±" << r.precision_std << "\t" << r.recall << "±" << r.recall_std
           << "\t" << r.f1 << "±" << r.f1_std;
    } else {
        os << r.precision << "\t" << r.recall << "\t" << r.f1;
    }
    return os.str();
}

}  // namespace icenet
