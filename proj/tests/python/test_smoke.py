import math

import wesma


def test_uwt_round_trip():
    x = [math.sin(0.37 * i) + 0.2 * math.cos(1.7 * i) for i in range(64)]
    dec = wesma.uwt_forward(x, filter="db2", levels=3)
    assert dec.levels == 3
    assert dec.boundary == "periodic"
    assert len(dec.details) == 3
    assert all(len(band) == 64 for band in dec.details)
    back = wesma.uwt_inverse(dec)
    assert max(abs(a - b) for a, b in zip(x, back)) < 1e-8


def test_max_levels():
    assert wesma.max_levels(1024, "haar") == 10
    assert wesma.max_levels(16, "db2") == 3


def test_denoise_improves_snr():
    clean = wesma.gen_signal("blocks", 2048)
    noisy, sigma = wesma.add_awgn(clean, target_snr_db=10.5, seed=3)
    assert sigma > 0
    denoised, report = wesma.denoise(noisy, filter="haar", levels=5, rule="soft",
                                     reference=clean)
    assert report["improvement_db"] > 3.0


def test_threshold_rules():
    assert wesma.apply_threshold(3.0, 1.0, "soft") == 2.0
    assert wesma.apply_threshold(0.5, 1.0, "hard") == 0.0
    assert abs(wesma.universal_threshold(1.0, 1024) - 3.7233) < 1e-3


def test_text_helpers():
    assert wesma.normalize("<b>Hi</b>   THERE") == "hi there"
    assert wesma.tokenize("hello, world!") == ["hello", "world"]


def test_wesma_scoring_separates_an_outlier():
    rows = [[1.0 + 0.01 * ((i * 7) % 5), -0.5, 0.25] for i in range(30)]
    model = wesma.fit_wesma(rows, drop_prob=0.3, layers=1, lambda_=1e-3)
    assert model.layer_count == 1
    assert model.feature_count == 3
    inlier_scores = [wesma.reconstruction_error(model, row) for row in rows]
    outlier = [5.0, 2.0, -3.0]
    assert wesma.reconstruction_error(model, outlier) > max(inlier_scores)
    assert len(wesma.transform(model, rows[0])) == 6  # concat mode


def test_evaluation_helpers():
    scores = [0.8, 0.4, 0.6, 0.2]
    labels = [True, True, False, False]
    assert wesma.roc_auc(scores, labels) == 0.75
    threshold = wesma.select_threshold([0.9, 0.1], [True, False])
    assert 0.1 < threshold < 0.9
