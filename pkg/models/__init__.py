from .models import (
    AnalysisResult,
    AnalysisState,
    ChokeKind,
    ChokePoint,
    Component,
    DEFAULT_AMOUNTS,
    DestructibleObstacle,
    EfopModel,
    LabeledGrid,
    MapData,
    Objective,
    Region,
    RegionKind,
    Resource,
    ResourceCluster,
    ResourceKind,
    RunReport,
    Separation,
    Solution,
    TileGrid,
    Zone,
    ZoneClassification,
)

__all__ = [
    'AnalysisResult', 'AnalysisState', 'ChokeKind', 'ChokePoint', 'Component',
    'DEFAULT_AMOUNTS', 'DestructibleObstacle', 'EfopModel', 'LabeledGrid',
    'MapData', 'Objective', 'Region', 'RegionKind', 'Resource',
    'ResourceCluster', 'ResourceKind', 'RunReport', 'Separation', 'Solution',
    'TileGrid', 'Zone', 'ZoneClassification',
]
