import numpy as np
import pytest

from dmiat import DmiatConfig, FoldPair, format_table, parse_table
from dmiat.augment import VariantSpec, compose, fit_fold, parse_variants
from dmiat.errors import ConfigurationError, EmptyVariantError
from oracles import make_dataset


def test_parse_variants_expands_d():
    specs = parse_variants(["A", "A+DMIAT", "D", "A+D+DMIAT"], ["ew", "iem"])
    names = [s.name for s in specs]
    assert names == ["A", "A+DMIAT", "D[ew]", "D[iem]", "A+D[ew]+DMIAT", "A+D[iem]+DMIAT"]
    assert specs[3].discretizers == ("iem",) and not specs[3].include_original
    assert specs[4].dmiat is not None
    assert parse_variants(["A+iem"], [])[0].discretizers == ("iem",)
    with pytest.raises(ConfigurationError):
        parse_variants(["A", "A"], ["ew"])
    with pytest.raises(ConfigurationError):
        parse_variants(["+"], ["ew"])
    with pytest.raises(ConfigurationError):
        VariantSpec("nothing", include_original=False)


def test_original_only_is_identity(glass, glass_folds):
    f = glass_folds[0]
    train, test = compose(glass, f, VariantSpec("A"))
    assert train == glass.subset(f.train_idx)
    assert test == glass.subset(f.test_idx)


def test_column_arity(glass, glass_folds):
    f = glass_folds[1]
    spec = parse_variants(["A+iem+DMIAT"], [], DmiatConfig())[0]
    fit = fit_fold(glass, f, ["iem"], 10, DmiatConfig())
    train, test = compose(glass, f, spec, fit)
    assert train.n_attributes == 9 + 9 + len(fit.cuts)
    assert train.same_schema(test)
    assert [a.name for a in train.attributes][9] == "RI__iem"
    assert train.attributes[-1].symbols == ("0", "1")
    dm = compose(glass, f, parse_variants(["A+DMIAT"], [])[0], fit)[0]
    assert 8 <= dm.n_attributes - 9 <= 20


def test_dmiat_without_cuts_equals_original():
    y = np.arange(40) % 2
    ds = make_dataset(np.arange(40.0)[:, None], y)
    f = FoldPair(np.arange(30), np.arange(30, 40))
    a = compose(ds, f, VariantSpec("A"))
    b = compose(ds, f, VariantSpec("A+DMIAT", dmiat=DmiatConfig()))
    assert a[0].attributes == b[0].attributes
    assert np.array_equal(a[1].X, b[1].X)
    with pytest.raises(EmptyVariantError):
        compose(ds, f, VariantSpec("DMIAT", include_original=False, dmiat=DmiatConfig()))


def test_d_only_keeps_nominal_and_maps_missing():
    X = np.array([[0.0, 1.0], [1.0, np.nan], [0.0, 3.0], [1.0, 4.0]] * 5)
    ds = make_dataset(X, [0, 1, 0, 1] * 5, nominal=(0,))
    f = FoldPair(np.arange(16), np.arange(16, 20))
    train, test = compose(ds, f, VariantSpec("D[ew]", False, ("ew",)), k=2)
    assert [a.name for a in train.attributes] == ["a0", "a1__ew"]
    assert np.isnan(test.X[1, 1])
    assert train.attributes[1].kind == "nominal"


def test_test_rows_do_not_move_fitted_columns(glass, glass_folds):
    f = glass_folds[4]
    spec = parse_variants(["A+D+DMIAT"], ["ef"])[0]
    fit = fit_fold(glass, f, ["ef"], 10, DmiatConfig())
    X = np.array(glass.X)
    X[f.test_idx] = X[f.test_idx] * 10 + 5
    noisy = type(glass)(glass.attributes, X, glass.y, glass.class_domain, glass.name, glass.class_name)
    fit2 = fit_fold(noisy, f, ["ef"], 10, DmiatConfig())
    assert fit.cuts == fit2.cuts and fit.schemes == fit2.schemes
    assert compose(glass, f, spec, fit)[0] == compose(noisy, f, spec, fit2)[0]


def test_unknown_method_and_imported_scheme(glass, glass_folds):
    f = glass_folds[0]
    with pytest.raises(ConfigurationError):
        fit_fold(glass, f, ["caim"])
    from dmiat import DiscretizationScheme
    imported = {"caim": [DiscretizationScheme(j, (1.0,), "caim") for j in glass.continuous_indices]}
    train, _ = compose(glass, f, parse_variants(["A+caim"], [])[0], imported=imported)
    assert train.n_attributes == 18 and train.attributes[9].symbols == ("bin0", "bin1")


def test_exported_variant_round_trips(glass, glass_folds):
    f = glass_folds[0]
    spec = parse_variants(["A+D"], ["iem"])[0]
    train, _ = compose(glass, f, spec)
    again = parse_table(format_table(train, "keel"), "keel", name=train.name)
    assert again == train
