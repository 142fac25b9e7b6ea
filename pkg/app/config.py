from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # lattice / statevector guards
    max_sites: int = 20
    dense_max_qubits: int = 12
    blockenc_max_qubits: int = 12
    chebyshev_max_k: int = 64

    # thresholding constants
    noiseless_threshold: float = 1e-13
    spin_threshold_constant: float = 30.0
    molecule_threshold_constant: float = 50.0

    # iterative ground-state solver
    eigsh_maxiter: int = 5000
    eigsh_ncv: int = 40
    residual_tol: float = 1e-10

    imag_tol: float = 1e-10

    default_trials: int = 100
    workers: int = 1

    cache_dir: str = ""
    log_level: str = "INFO"

    class Config:
        env_file = ".env"


def get_settings() -> Settings:
    return Settings()
