from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "Optimal Seeding"

    # Spectral radius / phase classification
    SPECTRAL_TOL: float = 1e-12
    SPECTRAL_MAX_ITER: int = 100_000
    PHASE_EPS: float = 1e-9
    MU_TOL: float = 1e-9

    # Giant-component fixed point and linear solves
    FIXED_POINT_TOL: float = 1e-12
    FIXED_POINT_MAX_ITER: int = 1_000_000
    LINEAR_RESIDUAL_TOL: float = 1e-9

    # Monte Carlo oracle
    SIM_N: int = 20_000
    SIM_TRIALS: int = 100
    SIM_BASE_SEED: int = 20240601
    SIM_MAX_N: int = 1_000_000
    SIM_WORKERS: int = 1
    AGREEMENT_SIGMAS: float = 3.0

    # Optimizer
    BRUTE_FORCE_MAX_TYPES: int = 4
    BRUTE_FORCE_MAX_BUDGET: int = 40
    SCHEDULE_EXTRA: int = 1

    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(env_file=".env", env_prefix="SEEDING_")


settings = Settings()
