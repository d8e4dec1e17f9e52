#pragma once

#include "agvplan/pipeline.hpp"

#include <filesystem>
#include <ostream>
#include <span>

namespace agv {

// CSV columns: t,x,y,v,theta,a,omega — one row per node, t_i = T * i / (N-1).
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

// CSV columns: i,cx,cy,L1,L2,L3,L4,area with area = (L2+L4)*(L1+L3).
void write_corridor_csv(const Corridor& corridor, std::ostream& out);

void write_records_csv(std::span<const BenchmarkRecord> records, std::ostream& out);

// Scene overlay: obstacles, inflated boundaries, corridor boxes, planned path
// and solved trajectory.
void write_scene_svg(const Scenario& scenario, const ObstacleSet& obstacles,
                     const PlannedPath& path, const Corridor& corridor,
                     const Trajectory* trajectory, std::ostream& out);

// Writes the plan outputs into a directory (trajectory.csv, corridor.csv,
// records.csv, and optionally scene.svg). Throws ParseError on I/O failure.
void write_plan_outputs(const Scenario& scenario, const PlanResult& result,
                        const std::filesystem::path& directory, bool with_svg);

} // namespace agv
