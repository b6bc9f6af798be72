#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "caustica/anamorph.hpp"
#include "caustica/caustics.hpp"
#include "caustica/cylinder.hpp"
#include "caustica/geometry.hpp"
#include "caustica/image.hpp"
#include "caustica/scene.hpp"
#include "caustica/water.hpp"

namespace py = pybind11;
using namespace caustica;

namespace {

Vec3 vec_from_seq(const py::sequence& s) {
    if (py::len(s) != 3) throw py::value_error("expected a 3-sequence");
    return Vec3{s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

py::dict stats_dict(const RenderStats& st) {
    py::dict d;
    d["mapped_pixels"] = st.mapped_pixels;
    d["total_pixels"] = st.total_pixels;
    d["unreachable_pixels"] = st.unreachable_pixels;
    d["region"] = py::make_tuple(st.region[0], st.region[1], st.region[2], st.region[3]);
    return d;
}

}  // namespace

PYBIND11_MODULE(_caustica, m) {
    m.doc() = "Cylindrical-mirror anamorphs, caustic envelopes, and air-water imaging";

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>())
        .def(py::init([](const py::sequence& s) { return vec_from_seq(s); }))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("norm", &Vec3::norm)
        .def("__repr__",
             [](const Vec3& v) {
                 return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                        std::to_string(v.z) + ")";
             })
        .def("__iter__", [](const Vec3& v) {
            return py::iter(py::make_tuple(v.x, v.y, v.z));
        });
    py::implicitly_convertible<py::sequence, Vec3>();

    // geometry
    m.def("reflect", &reflect, py::arg("d"), py::arg("n"),
          "Mirror reflection of direction d at unit normal n");
    m.def(
        "refract",
        [](const Vec3& d, const Vec3& n, double n_in, double n_out) {
            return refract(d, n, Interface{n_in, n_out});
        },
        py::arg("d"), py::arg("n"), py::arg("n_incident"), py::arg("n_transmitted"),
        "Snell refraction; None on total internal reflection");
    m.def(
        "intersect_cylinder",
        [](const Vec3& origin, const Vec3& dir, double radius)
            -> std::optional<std::pair<Vec3, Vec3>> {
            const auto h = intersect_cylinder(Ray{origin, normalized(dir)}, radius);
            if (!h) return std::nullopt;
            return std::make_pair(h->point, h->normal);
        },
        py::arg("origin"), py::arg("dir"), py::arg("radius"),
        "Nearest (point, outward normal) hit on the infinite cylinder, or None");

    // scene + tube reflection
    py::class_<Scene>(m, "Scene")
        .def(py::init<>())
        .def_readwrite("eye", &Scene::eye)
        .def_readwrite("radius", &Scene::radius)
        .def_readwrite("height", &Scene::height)
        .def("valid", &Scene::valid);
    m.def("default_scene", &default_scene, py::arg("eye_distance_from_axis") = false,
          "Reference viewing geometry: 5 cm tube, eye 25 cm away and 40 cm up");

    py::class_<ImagePair>(m, "ImagePair")
        .def_readonly("h_point", &ImagePair::h_point)
        .def_readonly("v_point", &ImagePair::v_point);

    m.def("trace_to_table", &trace_to_table, py::arg("scene"), py::arg("p"));
    m.def("solve_reflection_point", &solve_reflection_point, py::arg("scene"), py::arg("t"));
    m.def("image_pair", &image_pair, py::arg("scene"), py::arg("p"), py::arg("source"));
    m.def(
        "virtual_surface",
        [](const Scene& s, int na, int nh) {
            const auto surf = virtual_surface(s, na, nh);
            std::vector<std::tuple<double, double, double, double, double>> rows;
            rows.reserve(surf.samples.size());
            for (const auto& smp : surf.samples)
                rows.emplace_back(smp.param.azimuth, smp.param.height, smp.h_point.x,
                                  smp.h_point.y, smp.h_point.z);
            return rows;
        },
        py::arg("scene"), py::arg("azimuth_samples") = 64, py::arg("height_samples") = 24,
        "Rows of (azimuth, height, x, y, z) sampling the interior image surface");

    // caustics
    m.def("rainbow_deviation", &rainbow_deviation, py::arg("n"), py::arg("b"));
    m.def(
        "rainbow_minimum",
        [](double n) {
            const auto r = rainbow_minimum(n);
            return py::make_tuple(r.b, r.deviation);
        },
        py::arg("n"), "(impact parameter, deviation in radians) of the fold");
    m.def(
        "circle_caustic",
        [](double radius, const Vec3& source, int samples) {
            auto fam = point_source_circle_family(radius, source);
            const double saz = std::atan2(source.y, source.x);
            fam.param_min = saz + 0.02;
            fam.param_max = saz + 2 * 3.14159265358979323846 - 0.02;
            const auto sheet = envelope_2d(fam, samples);
            std::vector<std::tuple<double, double, double>> rows;
            for (const auto& s : sheet.samples)
                if (!s.degenerate) rows.emplace_back(s.param, s.point.x, s.point.y);
            return rows;
        },
        py::arg("radius"), py::arg("source"), py::arg("samples") = 1024,
        "Envelope of rays from a point source reflected inside a circle");

    py::enum_<SpotOrientation>(m, "SpotOrientation")
        .value("VERTICAL", SpotOrientation::Vertical)
        .value("HORIZONTAL", SpotOrientation::Horizontal);
    py::class_<BlurSpot>(m, "BlurSpot")
        .def_readonly("sigma_major", &BlurSpot::sigma_major)
        .def_readonly("sigma_minor", &BlurSpot::sigma_minor)
        .def_readonly("orientation", &BlurSpot::orientation)
        .def_readonly("occluded_fraction", &BlurSpot::occluded_fraction)
        .def_property_readonly("points", [](const BlurSpot& b) {
            std::vector<std::pair<double, double>> pts;
            pts.reserve(b.points.size());
            for (const auto& p : b.points) pts.emplace_back(p.x, p.y);
            return pts;
        });
    m.def("blur_spot", &blur_spot, py::arg("scene"), py::arg("aperture_diameter"),
          py::arg("focus_distance"), py::arg("source"), py::arg("p"), py::arg("grid") = 41);

    // water
    py::class_<WaterScene>(m, "WaterScene")
        .def(py::init<>())
        .def_readwrite("eye", &WaterScene::eye)
        .def_readwrite("floor_depth", &WaterScene::floor_depth)
        .def_readwrite("n_water", &WaterScene::n_water);
    py::class_<RefractedImagePair>(m, "RefractedImagePair")
        .def_readonly("h_point", &RefractedImagePair::h_point)
        .def_readonly("v_point", &RefractedImagePair::v_point)
        .def_readonly("crossing", &RefractedImagePair::crossing)
        .def_readonly("air_angle", &RefractedImagePair::air_angle)
        .def_readonly("water_angle", &RefractedImagePair::water_angle);
    m.def("apparent_point", &apparent_point, py::arg("scene"), py::arg("source"));
    py::class_<PoolProfileRow>(m, "PoolProfileRow")
        .def_readonly("gaze", &PoolProfileRow::gaze)
        .def_readonly("floor_point", &PoolProfileRow::floor_point)
        .def_readonly("h_point", &PoolProfileRow::h_point)
        .def_readonly("v_point", &PoolProfileRow::v_point)
        .def_readonly("back_projection", &PoolProfileRow::back_projection);
    m.def("pool_floor_profile", &pool_floor_profile, py::arg("scene"), py::arg("gaze_angles"));
    m.def(
        "pool_local_slopes",
        [](const WaterScene& ws, double gaze) -> std::optional<py::tuple> {
            const auto s = pool_local_slopes(ws, gaze);
            if (!s) return std::nullopt;
            return py::make_tuple(s->h, s->v, s->back);
        },
        py::arg("scene"), py::arg("gaze"),
        "(tangential, sagittal, back-projection) apparent floor slopes, radians");
    py::class_<ArcherSolution>(m, "ArcherSolution")
        .def_readonly("apparent_dir", &ArcherSolution::apparent_dir)
        .def_readonly("true_dir", &ArcherSolution::true_dir)
        .def_readonly("correction", &ArcherSolution::correction)
        .def_readonly("water_angle", &ArcherSolution::water_angle);
    m.def("archer_aim", &archer_aim, py::arg("scene"), py::arg("target"));
    m.def("archer_emergent_direction", &archer_emergent_direction, py::arg("scene"),
          py::arg("apparent_dir"), "None when the gaze lies outside Snell's window");
    m.def("snells_window_limit", &snells_window_limit, py::arg("n_water"));

    // anamorph
    py::enum_<AnamorphKind>(m, "AnamorphKind")
        .value("ERECT", AnamorphKind::Erect)
        .value("THREE_D", AnamorphKind::ThreeD)
        .value("FLAT", AnamorphKind::Flat);
    py::class_<AnamorphMap>(m, "AnamorphMap")
        .def_static(
            "build",
            [](AnamorphKind kind, const Scene& s, double w, double h, double standoff) {
                auto r = AnamorphMap::build(kind, s, w, h, standoff);
                if (std::holds_alternative<AnamorphBuildError>(r)) {
                    const auto& e = std::get<AnamorphBuildError>(r);
                    throw py::value_error(e.code + ": " + e.detail);
                }
                return std::get<AnamorphMap>(std::move(r));
            },
            py::arg("kind"), py::arg("scene"), py::arg("source_width"),
            py::arg("source_height"), py::arg("flat_standoff") = 0.01)
        .def("forward",
             [](const AnamorphMap& m_, double u, double v) { return m_.forward({u, v}); },
             py::arg("u"), py::arg("v"))
        .def(
            "inverse",
            [](const AnamorphMap& m_, const Vec3& t) -> std::optional<std::pair<double, double>> {
                const auto sp = m_.inverse(t);
                if (!sp) return std::nullopt;
                return std::make_pair(sp->u, sp->v);
            },
            py::arg("table_point"))
        .def_property_readonly("kind", &AnamorphMap::kind)
        .def_property_readonly("source_width", &AnamorphMap::source_width)
        .def_property_readonly("source_height", &AnamorphMap::source_height)
        .def("table_bounds", &AnamorphMap::table_bounds);
    m.def(
        "render_sheet",
        [](const AnamorphMap& map, const std::string& image_path,
           const std::string& out_path, double dpi, int workers) {
            const RasterImage src = load_image(image_path);
            RenderStats stats;
            const RasterImage sheet = render(map, src, dpi, &stats, workers);
            save_png(sheet, out_path);
            return stats_dict(stats);
        },
        py::arg("map"), py::arg("image_path"), py::arg("out_path"), py::arg("dpi") = 300.0,
        py::arg("workers") = 0,
        "Inverse-sample the source image through the map onto a table PNG");
}
