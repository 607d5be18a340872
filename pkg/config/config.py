"""
Configuration Management Module
Implements Singleton pattern for centralized configuration management
"""
import os
import yaml
from typing import Dict, Any, Optional, Tuple
from pathlib import Path
from dotenv import load_dotenv


class Config:
    """
    Singleton Configuration class for managing toolkit settings.
    Loads environment variables and the YAML profile of the active environment.
    """
    _instance: Optional['Config'] = None
    _initialized: bool = False

    def __new__(cls) -> 'Config':
        """Implement Singleton pattern."""
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        """Initialize configuration only once."""
        if not Config._initialized:
            # Load environment variables from .env file
            env_path = Path(__file__).parent.parent / '.env'
            load_dotenv(dotenv_path=env_path)

            # Load basic configuration
            self.environment = os.getenv('ENVIRONMENT', 'prod')
            self.log_level = os.getenv('LOG_LEVEL', 'INFO').upper()
            self.log_to_file = os.getenv('LOG_TO_FILE', 'false').lower() == 'true'
            self.n_jobs = os.getenv('N_JOBS')

            # Load environment-specific configuration
            self.env_config = self._load_environment_config()

            # Load named point and grid configurations
            self.configurations = self._load_configurations()

            # Set paths
            self.root_dir = Path(__file__).parent.parent
            self.reports_dir = Path(os.getenv('REPORTS_DIR', str(self.root_dir / 'reports')))
            self.allure_results_dir = self.reports_dir / 'allure-results'

            Config._initialized = True

    def _load_environment_config(self) -> Dict[str, Any]:
        """
        Load environment-specific configuration from YAML file.

        Returns:
            Dict containing environment configuration
        """
        config_path = Path(__file__).parent / 'environments' / f'{self.environment}.yml'
        if config_path.exists():
            with open(config_path, 'r') as file:
                return yaml.safe_load(file) or {}
        return {}

    def _load_configurations(self) -> Dict[str, Any]:
        """
        Load the named configurations (sharp cases, small reference grids) from YAML file.

        Returns:
            Dict containing configurations keyed by name
        """
        data_path = Path(__file__).parent / 'test_data' / 'configurations.yml'
        if data_path.exists():
            with open(data_path, 'r') as file:
                return (yaml.safe_load(file) or {}).get('configurations', {})
        return {}

    def ensure_reports_dir(self) -> Path:
        """
        Create the reports directory tree if it does not exist.

        Returns:
            Path of the reports directory
        """
        for directory in (self.reports_dir, self.allure_results_dir):
            directory.mkdir(parents=True, exist_ok=True)
        return self.reports_dir

    def get_tolerance(self, name: str = 'bound') -> float:
        """
        Get an absolute numeric tolerance.

        Args:
            name: Tolerance name

        Returns:
            Tolerance value
        """
        return float(self.env_config.get('tolerance', {}).get(name, 1e-9))

    def get_bottleneck_metric(self) -> str:
        """Get the default bottleneck ground metric."""
        return self.env_config.get('bottleneck', {}).get('metric', 'chebyshev')

    def get_grid_origin(self, dim: int) -> Tuple[float, ...]:
        """
        Get the default grid origin for a given dimension.

        Args:
            dim: Ambient dimension

        Returns:
            Origin tuple, the zero vector unless the profile sets one
        """
        origin = self.env_config.get('grid', {}).get('origin')
        if origin is None:
            return (0.0,) * dim
        return tuple(float(value) for value in origin)

    def get_dense_limit(self) -> int:
        """Get the largest cloud size for which all-pairs MST candidates are used."""
        return int(self.env_config.get('persistence', {}).get('dense_limit', 2500))

    def get_verification_settings(self) -> Dict[str, Any]:
        """
        Get verification suite settings.

        Returns:
            Dict containing suite settings, with N_JOBS applied
        """
        settings = {
            'seeds': 100,
            'min_points': 10,
            'max_points': 120,
            'dimensions': [1, 2, 3],
            'bary_fractions': [0.1, 0.2, 0.3],
            'sparse_fractions': [0.02, 0.06, 0.1],
            'grid_fractions': [0.05, 0.12, 0.25],
            'duality_max_cells': 100,
            'duality_buffers': [1, 2, 3],
            'n_jobs': 1,
        }
        settings.update(self.env_config.get('verification', {}) or {})
        if self.n_jobs:
            settings['n_jobs'] = int(self.n_jobs)
        return settings

    def get_synthetic_settings(self) -> Dict[str, Any]:
        """
        Get synthetic cloud generator settings.

        Returns:
            Dict containing sample size, noise and shape regions
        """
        return self.env_config.get('synthetic', {}) or {}

    def get_logging_config(self) -> Dict[str, Any]:
        """
        Get logging configuration.

        Returns:
            Dict containing logging settings
        """
        return {
            'level': self.log_level,
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            'datefmt': '%Y-%m-%d %H:%M:%S'
        }

    def get_configuration(self, name: str) -> Dict[str, Any]:
        """
        Get a named configuration.

        Args:
            name: Configuration name (two_point_bary, fig7_diamond, ...)

        Returns:
            Dict containing the configuration
        """
        return self.configurations.get(name, {})



# Create a singleton instance
config = Config()
