// Writes sample input files for the CLI exit-code test.

#include <cstdio>
#include <string>

#include "crfuchs/cauchy_system.hpp"
#include "crfuchs/io.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: gen_fixtures <dir>\n");
        return 1;
    }
    std::string dir = argv[1];

    // model hypersurface m = 1 (automatically Fuchsian)
    write_json_file(dir + "/model_m1.hs", hypersurface_to_json(model_hypersurface(1, 1)));

    // m = 2 with h22 = 1: ord 0 < m-1, not Fuchsian
    {
        RealAdmissibleForm h = model_hypersurface(2, 1);
        static VarsPtr uv = make_vars({"u"});
        Jet s(uv, Truncation::of({h.u_cap}, h.u_cap));
        s.add_term(Jet::Mono(1, 0), Scalar(1));
        h.set(2, 2, s);
        write_json_file(dir + "/bad_m2.hs", hypersurface_to_json(h));
    }

    // caps below 2m+4: undecidable
    {
        RealAdmissibleForm h = model_hypersurface(2, 1);
        h.index_cap = 4;
        write_json_file(dir + "/shallow_m2.hs", hypersurface_to_json(h));
    }

    // a random Fuchsian hypersurface for the associate pipeline
    write_json_file(dir + "/fuchsian_m2.hs",
                    hypersurface_to_json(random_fuchsian_hypersurface(2, 20260808)));

    // source/target ODE pair related by a compatible map, plus the map
    {
        int m = 2;
        SingularODE es = random_fuchsian_ode(m, 31415);
        NormalizedMap H0 = random_compatible_map(es, 9265, 4);
        SingularODE e = push_forward(es, H0);
        write_json_file(dir + "/source.ode", ode_to_json(es));
        write_json_file(dir + "/target.ode", ode_to_json(e));
        write_json_file(dir + "/map.map", map_to_json(H0));
        FreeParams fp = free_params_from(H0);
        Json fj;
        for (const auto& [k, v] : fp)
            fj[k] = Json::array({v.re().get_str(), v.im().get_str()});
        write_json_file(dir + "/free.json", fj);
        // a corrupted map: perturb g0 so the identity fails
        NormalizedMap bad = H0;
        bad.g0.add_term(Jet::Mono(1, 1), Scalar::rat(1, 7));
        write_json_file(dir + "/bad_map.map", map_to_json(bad));
    }

    // a deeper pair for the Cauchy-system and Briot-Bouquet reduction path
    {
        int m = 2;
        Truncation deep = Truncation::of({2 * m + 2, 4 * m + 10, 2 * m + 2}, 4 * m + 12);
        SingularODE es = random_fuchsian_ode(m, 27182);
        es.Phi = embed(es.Phi, ode_space(), deep);
        NormalizedMap H0 = random_compatible_map(es, 8182, 4);
        SingularODE e = push_forward(es, H0);
        write_json_file(dir + "/deep_source.ode", ode_to_json(es));
        write_json_file(dir + "/deep_target.ode", ode_to_json(e));
        write_json_file(dir + "/deep_map.map", map_to_json(H0));
    }

    // scalar Briot-Bouquet systems
    {
        Truncation t = Truncation::of({8, 2}, 10);
        BBSystem lin;
        lin.n = 1;
        Jet F(bb_space(1), t);
        Jet::Mono e(2, 0);
        e[1] = 1;
        F.add_term(e, Scalar(1)); // x y' = y
        lin.F = {F};
        write_json_file(dir + "/lin.bb", bb_to_json(lin));

        BBSystem res = lin;
        Jet Fr = F;
        Jet::Mono ex(2, 0);
        ex[0] = 1;
        Fr.add_term(ex, Scalar(1)); // x y' = y + x: resonant at k = 1
        res.F = {Fr};
        write_json_file(dir + "/resonant.bb", bb_to_json(res));
    }

    std::printf("fixtures written to %s\n", dir.c_str());
    return 0;
}
