import numpy as np
import pytest

from vardehaze import fileio


def test_pfm_gray_round_trip(tmp_path, rng):
    data = rng.random((5, 7)).astype(np.float32)
    fileio.write_pfm(tmp_path / "a.pfm", data)
    np.testing.assert_array_equal(fileio.read_pfm(tmp_path / "a.pfm"), data)


def test_pfm_color_big_endian(tmp_path, rng):
    data = rng.random((4, 3, 3)).astype(np.float32)
    fileio.write_pfm(tmp_path / "c.pfm", data, little_endian=False)
    assert (tmp_path / "c.pfm").read_bytes().startswith(b"PF\n3 4\n1.0\n")
    np.testing.assert_array_equal(fileio.read_pfm(tmp_path / "c.pfm"), data)


def test_pfm_layout(tmp_path):
    data = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.float32)
    fileio.write_pfm(tmp_path / "l.pfm", data)
    raw = (tmp_path / "l.pfm").read_bytes()
    header = b"Pf\n2 2\n-1.0\n"
    assert raw.startswith(header)
    body = np.frombuffer(raw[len(header):], dtype="<f4")
    # bottom row first
    np.testing.assert_array_equal(body, [3, 4, 1, 2])


def test_pfm_rejects_garbage(tmp_path):
    (tmp_path / "bad.pfm").write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    with pytest.raises(ValueError):
        fileio.read_pfm(tmp_path / "bad.pfm")
    (tmp_path / "short.pfm").write_bytes(b"Pf\n4 4\n-1.0\n\x00\x00")
    with pytest.raises(ValueError):
        fileio.read_pfm(tmp_path / "short.pfm")


@pytest.mark.parametrize("suffix", [".png", ".ppm"])
def test_color_round_trip(tmp_path, rng, suffix):
    img = np.round(rng.random((6, 5, 3)) * 255) / 255
    fileio.write_image(tmp_path / f"x{suffix}", img)
    np.testing.assert_allclose(fileio.read_image(tmp_path / f"x{suffix}"), img, atol=1e-12)


def test_pgm_gray(tmp_path, rng):
    img = np.round(rng.random((6, 5)) * 255) / 255
    fileio.write_image(tmp_path / "g.pgm", img)
    back = fileio.read_image(tmp_path / "g.pgm")
    assert back.shape == (6, 5)
    assert fileio.read_color(tmp_path / "g.pgm").shape == (6, 5, 3)


def test_corrupt_image(tmp_path):
    (tmp_path / "x.png").write_bytes(b"not a png")
    with pytest.raises(ValueError):
        fileio.read_image(tmp_path / "x.png")


def test_config_parsing(tmp_path):
    (tmp_path / "c.cfg").write_text("# comment\ntau = 2.5\n\nlambda3=4 # trailing\nt-eps = 0.2\n")
    assert fileio.read_config(tmp_path / "c.cfg") == {"tau": "2.5", "lambda3": "4", "t_eps": "0.2"}


def test_airlight_sidecar(tmp_path):
    fileio.write_airlight(tmp_path / "a.txt", [0.8, 0.7, 0.6])
    np.testing.assert_allclose(fileio.read_airlight(tmp_path / "a.txt"), [0.8, 0.7, 0.6])
