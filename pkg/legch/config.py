import os
from pathlib import Path

from dotenv import load_dotenv

# Подхватываем .env из рабочего каталога, если он есть
load_dotenv()

package_dir = Path(__file__).resolve().parent
corpus_path = Path(os.getenv("LEGCH_CORPUS_DIR", str(package_dir / "data" / "corpus")))
blocks_path = Path(os.getenv("LEGCH_BLOCKS_DIR", str(corpus_path)))

# Имя файла манифеста библиотеки блоков внутри blocks_path
BLOCKS_MANIFEST = os.getenv("LEGCH_BLOCKS_MANIFEST", "blocks.json")

# Параллелизм: число потоков для независимых вычислений (по хордам, по парам)
LEGCH_THREADS = max(1, int(os.getenv("LEGCH_THREADS", "1")))

# Уровень логирования для дерева логгеров legch
LEGCH_LOG_LEVEL = os.getenv("LEGCH_LOG_LEVEL", "WARNING").upper()

# Максимальный размер входного файла диаграммы или манифеста (в байтах)
MAX_FILE_SIZE = int(os.getenv("LEGCH_MAX_FILE_SIZE", str(1024 * 1024)))

# Размерность объемлющего пространства; диаграммы существуют только при n = 1
AMBIENT_DIMENSION = int(os.getenv("LEGCH_AMBIENT_DIM", "1"))
