#include "gnar/evaluation.hpp"

#include <algorithm>

#include "gnar/parallel.hpp"

namespace gnar {

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  SummaryStats s;
  s.count = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.count - 1);
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  return s;
}

NetworkTimeSeries naive_forecast(const NetworkTimeSeries& series) {
  if (series.steps() < 2) throw std::invalid_argument("naive forecast needs at least 2 steps");
  return NetworkTimeSeries(series.values().topRows(series.steps() - 1), series.frequency(),
                           series.date_at(1));
}

namespace {

struct PeriodTerms {
  std::vector<double> actual;
  std::vector<double> predicted;
  std::vector<double> previous;
};

Eigen::RowVectorXd one_step(const NetworkTimeSeries& series, const CountyNetwork& net,
                            const ModelSpec& model, Eigen::Index step, TransformKind kind) {
  if (model.is_naive()) return series.values().row(step - 1);
  const NetworkTimeSeries history = series.slice(0, step);
  const Transform t = fit_transform(history, kind);
  const NetworkTimeSeries train = apply(history, t);
  const GnarFit f = fit(train, net, *model.order);
  return invert(forecast(f, train, net, 1), t).values().row(0);
}

}  // namespace

ForecastEvaluation rolling_horizon(const NetworkTimeSeries& series, const CountyNetwork& net,
                                   const ModelSpec& model, int test_periods,
                                   const RollingOptions& options) {
  if (static_cast<std::size_t>(series.nodes()) != net.size()) {
    throw std::invalid_argument("series width does not match network size");
  }
  if (test_periods < 1) throw std::invalid_argument("test_periods must be at least 1");
  const Eigen::Index p = model.is_naive() ? 1 : model.order->p;
  if (series.steps() <= p + test_periods) {
    throw std::invalid_argument("insufficient data: " + std::to_string(series.steps()) +
                                " steps for p = " + std::to_string(p) + " and " +
                                std::to_string(test_periods) + " test periods");
  }

  std::vector<std::size_t> scored = options.scored_nodes;
  if (scored.empty()) {
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (!net.attrs(i).external) scored.push_back(i);
    }
  }
  if (scored.empty()) throw std::invalid_argument("no nodes to score");

  const Eigen::Index first = series.steps() - test_periods;
  std::vector<PeriodTerms> terms(static_cast<std::size_t>(test_periods));
  parallel_for(terms.size(), options.workers, [&](std::size_t k) {
    const Eigen::Index step = first + static_cast<Eigen::Index>(k);
    Eigen::RowVectorXd predicted;
    try {
      predicted = one_step(series, net, model, step, options.transform);
    } catch (const std::exception& e) {
      throw PeriodFailure(static_cast<int>(k) + 1, e.what());
    }
    auto& out = terms[k];
    for (std::size_t i : scored) {
      const auto c = static_cast<Eigen::Index>(i);
      out.actual.push_back(series(step, c));
      out.predicted.push_back(predicted(c));
      out.previous.push_back(series(step - 1, c));
    }
  });

  ForecastEvaluation eval;
  eval.model = model.name;
  PeriodTerms pooled;
  std::vector<double> mapes, mases;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    PeriodScore ps;
    ps.period = static_cast<int>(k) + 1;
    ps.step = first + static_cast<Eigen::Index>(k);
    ps.evaluated_nodes = scored.size();

    const PeriodTerms* src = &terms[k];
    if (options.aggregation == Aggregation::cumulative) {
      pooled.actual.insert(pooled.actual.end(), terms[k].actual.begin(), terms[k].actual.end());
      pooled.predicted.insert(pooled.predicted.end(), terms[k].predicted.begin(), terms[k].predicted.end());
      pooled.previous.insert(pooled.previous.end(), terms[k].previous.begin(), terms[k].previous.end());
      src = &pooled;
    }
    try {
      const auto m = mape(src->actual, src->predicted);
      ps.mape = m.value;
      ps.mape_excluded = m.excluded;
      mapes.push_back(m.value);
    } catch (const UndefinedMetric&) {
      ps.mape_excluded = src->actual.size();
    }
    try {
      const auto m = mase(src->actual, src->predicted, src->previous, options.mase_variant);
      ps.mase = m.value;
      ps.mase_excluded = m.excluded;
      mases.push_back(m.value);
    } catch (const UndefinedMetric&) {
      ps.mase_excluded = src->actual.size();
    }
    eval.per_period.push_back(ps);
  }
  if (!mapes.empty()) eval.mape_summary = summarize(mapes);
  if (!mases.empty()) eval.mase_summary = summarize(mases);
  return eval;
}

bool predictive_power(const ForecastEvaluation& evaluation) {
  return evaluation.mase_summary && evaluation.mase_summary->mean < 1.0;
}

}  // namespace gnar
