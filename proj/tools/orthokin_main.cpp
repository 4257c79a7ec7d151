// Command-line front end. All angles on this interface are degrees; all
// numeric output uses 9 significant digits. Exit codes: 0 success, 1 domain
// error (stable error name on stderr), 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orthokin/orthokin.hpp"

namespace {

using namespace orthokin;

std::string vec_line(const char* name, const Eigen::Vector3d& v) {
  return std::string(name) + " = " + format9(v[0]) + " " + format9(v[1]) +
         " " + format9(v[2]) + "\n";
}

std::string num_line(const char* name, double v) {
  return std::string(name) + " = " + format9(v) + "\n";
}

DeviceGeometry geometry_from(const std::string& path) {
  if (path.empty()) return DeviceGeometry{};
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot read " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_geometry(text.str());
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot write " + path);
  }
  out << content;
  std::cout << "wrote " << path << "\n";
}

Box box_from(const std::vector<double>& b) {
  Box box;
  box.lo = {b[0], b[1], b[2]};
  box.hi = {b[3], b[4], b[5]};
  return box;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematics, workspace and sizing tools for a decoupled "
               "six-axis haptic device"};
  app.require_subcommand(1);

  std::string run_error;
  int run_status = 0;

  // ik <x> <y> <z>
  auto* ik = app.add_subcommand("ik", "Carriage positions for a tool point");
  std::vector<double> ik_p{0.0, 0.0, 0.0};
  std::string ik_geom;
  ik->add_option("x", ik_p[0], "tool point x")->required();
  ik->add_option("y", ik_p[1], "tool point y")->required();
  ik->add_option("z", ik_p[2], "tool point z")->required();
  ik->add_option("--geom", ik_geom, "geometry JSON file");
  ik->callback([&] {
    const DeviceGeometry g = geometry_from(ik_geom);
    const TranslationJoints j =
        ik_translation({ik_p[0], ik_p[1], ik_p[2]}, g);
    std::cout << vec_line("rho", j.rho);
  });

  // fk <r1> <r2> <r3>
  auto* fk = app.add_subcommand("fk", "Tool point for carriage positions");
  std::vector<double> fk_r{0.0, 0.0, 0.0};
  std::string fk_geom;
  fk->add_option("r1", fk_r[0], "carriage 1 position")->required();
  fk->add_option("r2", fk_r[1], "carriage 2 position")->required();
  fk->add_option("r3", fk_r[2], "carriage 3 position")->required();
  fk->add_option("--geom", fk_geom, "geometry JSON file");
  fk->callback([&] {
    const DeviceGeometry g = geometry_from(fk_geom);
    TranslationJoints j;
    j.rho = {fk_r[0], fk_r[1], fk_r[2]};
    std::cout << vec_line("p", fk_translation(j, g));
  });

  // wrist-ik <qw> <qx> <qy> <qz>
  auto* wik = app.add_subcommand("wrist-ik", "Wrist joint angles for an "
                                             "orientation quaternion");
  std::vector<double> wq{1.0, 0.0, 0.0, 0.0};
  std::string wik_geom;
  wik->add_option("qw", wq[0], "quaternion w")->required();
  wik->add_option("qx", wq[1], "quaternion x")->required();
  wik->add_option("qy", wq[2], "quaternion y")->required();
  wik->add_option("qz", wq[3], "quaternion z")->required();
  wik->add_option("--geom", wik_geom, "geometry JSON file");
  wik->callback([&] {
    const DeviceGeometry g = geometry_from(wik_geom);
    const Eigen::Quaterniond q(wq[0], wq[1], wq[2], wq[3]);
    if (q.norm() < 1e-12) {
      throw CLI::ValidationError("wrist-ik", "quaternion has zero norm");
    }
    const WristIk sol = ik_wrist(q.normalized());
    const WristLimitReport lim = check_wrist_limits(sol.joints, g);
    Eigen::Vector3d deg = sol.joints.theta;
    for (int i = 0; i < 3; ++i) deg[i] = rad2deg(deg[i]);
    std::cout << vec_line("theta_deg", deg)
              << "within_limits = " << (lim.feasible ? 1 : 0) << "\n";
    if (sol.gimbal_singular) {
      run_error = std::string(error_name(ErrorCode::GimbalSingular));
      run_status = 1;
    }
  });

  // jacobian <x> <y> <z>
  auto* jac = app.add_subcommand("jacobian", "Translation Jacobian and "
                                             "velocity amplification");
  std::vector<double> jac_p{0.0, 0.0, 0.0};
  std::string jac_geom;
  jac->add_option("x", jac_p[0], "tool point x")->required();
  jac->add_option("y", jac_p[1], "tool point y")->required();
  jac->add_option("z", jac_p[2], "tool point z")->required();
  jac->add_option("--geom", jac_geom, "geometry JSON file");
  jac->callback([&] {
    const DeviceGeometry g = geometry_from(jac_geom);
    const Eigen::Vector3d p{jac_p[0], jac_p[1], jac_p[2]};
    const Eigen::Matrix3d J = jacobian_translation(p, g);
    std::cout << vec_line("J1", J.row(0).transpose())
              << vec_line("J2", J.row(1).transpose())
              << vec_line("J3", J.row(2).transpose());
    const Amplification amp = velocity_amplification(p, g);
    std::cout << vec_line("sigma", amp.sigma) << num_line("kappa", amp.kappa);
  });

  // transmission <x> <y> <z> --leg N --samples M
  auto* tr = app.add_subcommand("transmission", "Double-cardan chain sweep "
                                                "at a tool point");
  std::vector<double> tr_p{0.0, 0.0, 0.0};
  int tr_leg = 1;
  int tr_samples = 8;
  std::string tr_geom;
  tr->add_option("x", tr_p[0], "tool point x")->required();
  tr->add_option("y", tr_p[1], "tool point y")->required();
  tr->add_option("z", tr_p[2], "tool point z")->required();
  tr->add_option("--leg", tr_leg, "leg index")
      ->required()
      ->check(CLI::Range(1, 3));
  tr->add_option("--samples", tr_samples, "motor angle samples per turn")
      ->check(CLI::Range(1, 1000000));
  tr->add_option("--geom", tr_geom, "geometry JSON file");
  tr->callback([&] {
    const DeviceGeometry g = geometry_from(tr_geom);
    const Eigen::Vector3d p{tr_p[0], tr_p[1], tr_p[2]};
    std::cout << num_line("beta_deg", rad2deg(bend_angle(p, g, tr_leg)));
    std::cout << "phi_motor_deg,phi_after_u1_deg,phi_after_u2_deg\n";
    for (int k = 0; k < tr_samples; ++k) {
      const double phi_deg = 360.0 * k / tr_samples;
      const CardanChainState st =
          double_cardan_transfer(deg2rad(phi_deg), p, g, tr_leg);
      std::cout << format9(phi_deg) << "," << format9(rad2deg(st.phi_after_u1))
                << "," << format9(rad2deg(st.phi_after_u2)) << "\n";
    }
  });

  // map --bounds ... --res N --out file --format csv|json|xyz
  auto* mp = app.add_subcommand("map", "Feasibility and conditioning grid");
  std::vector<double> mp_bounds{-1.0, -1.0, -1.0, 1.0, 1.0, 1.0};
  int mp_res = 25;
  std::string mp_out, mp_geom;
  GridFormat mp_format = GridFormat::Csv;
  const std::map<std::string, GridFormat> format_names{
      {"csv", GridFormat::Csv},
      {"json", GridFormat::Json},
      {"xyz", GridFormat::Xyz}};
  mp->add_option("--bounds", mp_bounds,
                 "xlo ylo zlo xhi yhi zhi (default: reach box +/-L)")
      ->expected(6);
  mp->add_option("--res", mp_res, "cells per axis")->check(CLI::Range(2, 501));
  mp->add_option("--out", mp_out, "output file (default: stdout)");
  mp->add_option("--format", mp_format, "csv, json or xyz")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  mp->add_option("--geom", mp_geom, "geometry JSON file");
  mp->callback([&] {
    const DeviceGeometry g = geometry_from(mp_geom);
    Box b;
    if (mp->count("--bounds") > 0) {
      b = box_from(mp_bounds);
    } else {
      b.lo = Eigen::Vector3d::Constant(-g.leg_length);
      b.hi = Eigen::Vector3d::Constant(g.leg_length);
    }
    const WorkspaceGrid grid = map_workspace(g, b, mp_res);
    write_output(mp_out, export_grid(grid, mp_format));
  });

  // cube [--tol t] [--bounds ...]
  auto* cb = app.add_subcommand("cube", "Largest axis-aligned feasible cube");
  double cb_tol = 1e-4;
  std::vector<double> cb_bounds{-1.0, -1.0, -1.0, 1.0, 1.0, 1.0};
  std::string cb_geom;
  cb->add_option("--tol", cb_tol, "edge bisection tolerance (length units)");
  cb->add_option("--bounds", cb_bounds,
                 "xlo ylo zlo xhi yhi zhi (default: reach box +/-L)")
      ->expected(6);
  cb->add_option("--geom", cb_geom, "geometry JSON file");
  cb->callback([&] {
    const DeviceGeometry g = geometry_from(cb_geom);
    Box b;
    if (cb->count("--bounds") > 0) {
      b = box_from(cb_bounds);
    } else {
      b.lo = Eigen::Vector3d::Constant(-g.leg_length);
      b.hi = Eigen::Vector3d::Constant(g.leg_length);
    }
    const CubicWorkspace cube = largest_cube(g, b, cb_tol);
    std::cout << num_line("edge", cube.edge) << vec_line("center", cube.center);
  });

  // optimize --edge a --psi p [--tol t]
  auto* op = app.add_subcommand("optimize", "Size the leg length for a "
                                            "target cube");
  double op_edge = 0.0, op_psi = 0.0, op_tol = 1e-6;
  std::string op_geom;
  op->add_option("--edge", op_edge, "target cube edge")->required();
  op->add_option("--psi", op_psi, "velocity amplification bound")->required();
  op->add_option("--tol", op_tol, "relative tolerance on the leg length");
  op->add_option("--geom", op_geom, "geometry template JSON file");
  op->callback([&] {
    const DeviceGeometry g = geometry_from(op_geom);
    const SizingReport rep = size_leg_length(op_edge, op_psi, g, op_tol);
    std::cout << num_line("leg_length", rep.leg_length)
              << num_line("cube_edge", rep.cube.edge)
              << vec_line("cube_center", rep.cube.center)
              << vec_line("stroke_min_required", rep.stroke_min_required)
              << vec_line("stroke_max_required", rep.stroke_max_required)
              << num_line("worst_kappa", rep.worst_kappa)
              << "certificate_pass = " << (rep.pass_at_solution ? 1 : 0)
              << "\n"
              << num_line("lower_test", rep.lower_test)
              << "certificate_fail_below = " << (rep.fail_below ? 1 : 0)
              << "\n";
  });

  // sweep --lengths ... --edge a --psi p
  auto* sw = app.add_subcommand("sweep", "Cube size and conditioning across "
                                         "candidate leg lengths");
  std::vector<double> sw_lengths;
  double sw_edge = 0.0, sw_psi = 0.0;
  std::string sw_geom;
  sw->add_option("--lengths", sw_lengths, "candidate leg lengths")
      ->required()
      ->expected(-1);
  sw->add_option("--edge", sw_edge, "target cube edge")->required();
  sw->add_option("--psi", sw_psi, "velocity amplification bound")->required();
  sw->add_option("--geom", sw_geom, "geometry template JSON file");
  sw->callback([&] {
    const DeviceGeometry g = geometry_from(sw_geom);
    const auto rows = sweep_report(g, sw_lengths, sw_edge, sw_psi);
    std::cout << "leg_length,achieved_edge,worst_kappa,pass,status\n";
    for (const SweepRow& r : rows) {
      std::cout << format9(r.leg_length) << "," << format9(r.achieved_edge)
                << "," << format9(r.worst_kappa) << "," << (r.pass ? 1 : 0)
                << "," << r.status << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const orthokin::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (run_status != 0) {
    std::cerr << run_error << "\n";
  }
  return run_status;
}
