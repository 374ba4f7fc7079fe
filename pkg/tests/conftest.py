import numpy as np
import pytest
from scipy.io import wavfile

from randfb import _kernels_py

try:
    from randfb import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

SR = 22050


def flute_like(n, sr=SR, seed=3):
    """Sustained harmonic tone with vibrato and a little breath noise."""
    t = np.arange(n) / sr
    f0 = 523.25 * (1.0 + 0.004 * np.sin(2 * np.pi * 5.0 * t))
    phase = 2 * np.pi * np.cumsum(f0) / sr
    y = sum(a * np.sin(k * phase) for k, a in ((1, 1.0), (2, 0.35), (3, 0.12), (4, 0.05)))
    y = y + 0.01 * np.random.default_rng(seed).standard_normal(n)
    return 0.8 * y / np.abs(y).max()


@pytest.fixture(scope="session")
def wav_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("wav")
    y = flute_like(30000)
    wavfile.write(d / "flute16.wav", SR, np.round(y * 32767).astype(np.int16))
    stereo = np.stack([y, -0.5 * y], axis=1).astype(np.float32)
    wavfile.write(d / "flute_f32_stereo.wav", SR, stereo)
    wavfile.write(d / "tiny16.wav", 8000, np.array([16384, -16384, 0, 0], dtype=np.int16))
    wavfile.write(d / "silent16.wav", 8000, np.zeros(64, dtype=np.int16))
    wavfile.write(d / "pcm8.wav", 8000, np.full(64, 200, dtype=np.uint8))
    wavfile.write(d / "pcm32.wav", 8000, np.arange(64, dtype=np.int32) * 1000)
    (d / "garbage.wav").write_bytes(b"not a riff file at all")
    return d


@pytest.fixture(scope="session")
def flute_wav(wav_dir):
    return wav_dir / "flute16.wav"


BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(
    pytest.param(_kernels_c, id="cython", marks=pytest.mark.skipif(_kernels_c is None, reason="extension not built"))
)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
