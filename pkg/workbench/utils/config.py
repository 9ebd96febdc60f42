"""
Configuration management using Pydantic Settings
Size gates, corpus location and output defaults come from WORKBENCH_* environment variables
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator
from functools import lru_cache


class Settings(BaseSettings):
    """
    Workbench settings loaded from environment variables
    Uses .env file for local development
    """

    model_config = SettingsConfigDict(
        env_prefix="WORKBENCH_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application Settings
    APP_NAME: str = "Boolean Monoid Workbench"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Size gates
    MAX_N: int = Field(16, description="Largest lattice carrier accepted")
    MAX_EXHAUSTIVE: int = Field(7, description="Largest atom count for element-level checks")
    TARGET_MAX_SIZE: int = 5  # default epi targets: modular corpus lattices up to this size

    # Corpus and output
    CORPUS_DIR: str = "./data/corpus"
    EXPORT_DIR: str = "./exports"
    CORPUS_BATCH_SIZE: int = 4
    OUTPUT_FORMAT: str = "text"

    # Logging
    LOG_LEVEL: str = "INFO"

    @field_validator("MAX_N", "MAX_EXHAUSTIVE", "TARGET_MAX_SIZE", "CORPUS_BATCH_SIZE")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Gates must be positive"""
        if v < 1:
            raise ValueError("size gates must be positive")
        return v

    @field_validator("OUTPUT_FORMAT")
    @classmethod
    def validate_format(cls, v: str) -> str:
        v = v.strip().lower()
        if v not in ("text", "json"):
            raise ValueError("OUTPUT_FORMAT must be 'text' or 'json'")
        return v


@lru_cache()
def get_settings() -> Settings:
    """
    Returns cached settings instance
    Singleton pattern for configuration
    """
    return Settings()


# Export settings instance
settings = get_settings()
